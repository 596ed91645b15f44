#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace clir {

/// Maps a lower-cased token to its index stem. Any callable works, so a
/// lemmatizer can be dropped in where a suffix stripper is used by default.
using Stemmer = std::function<std::string(std::string_view)>;

/// Porter's suffix-stripping algorithm, following the reference ANSI C
/// release (including its "bli" and "logi" departures). Expects lower case.
std::string porter_stem(std::string_view word);

/// Light inflectional stemmers: plural and feminine endings for French,
/// final vowel (and the c/g + h spelling) for Italian.
std::string french_light_stem(std::string_view word);
std::string italian_light_stem(std::string_view word);

/// Returns the default stemmer for "en", "fr" or "it"; the identity otherwise.
Stemmer default_stemmer(std::string_view language);

Stemmer identity_stemmer();

}  // namespace clir

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace clir {

struct Topic {
    std::string id;
    std::string title;
    std::string description;
    std::string narrative;

    /// Title and description joined by a blank.
    std::string query_text() const;
};

/// Line-tagged topic records: `<num>`, `<title>`, `<desc>`/`<description>`,
/// `<narr>`/`<narrative>`. A field runs until the next tag; `<top>` wrappers,
/// closing tags and TREC labels such as "Number:" are ignored. Throws
/// DataError on text before the first `<num>` or on duplicate topic ids.
std::vector<Topic> read_topics(std::istream& in);
std::vector<Topic> load_topics(const std::filesystem::path& path);

}  // namespace clir

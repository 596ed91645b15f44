#include "clir/topics.hpp"

#include <istream>
#include <set>
#include <string_view>

#include "clir/error.hpp"
#include "clir/utf8.hpp"
#include "io_util.hpp"

namespace clir {

namespace {

enum class Field { none, num, title, description, narrative };

Field field_for(std::string_view tag) {
    if (tag == "num") return Field::num;
    if (tag == "title") return Field::title;
    if (tag == "desc" || tag == "description") return Field::description;
    if (tag == "narr" || tag == "narrative") return Field::narrative;
    return Field::none;
}

std::string_view strip_label(std::string_view text) {
    for (std::string_view label : {"Number:", "Description:", "Narrative:", "Title:"})
        if (text.substr(0, label.size()) == label) return detail::trim(text.substr(label.size()));
    return text;
}

void append(std::string& field, std::string_view text) {
    text = detail::trim(text);
    if (text.empty()) return;
    if (!field.empty()) field.push_back(' ');
    field.append(text);
}

}  // namespace

std::string Topic::query_text() const {
    if (title.empty()) return description;
    if (description.empty()) return title;
    return title + " " + description;
}

std::vector<Topic> read_topics(std::istream& in) {
    std::vector<Topic> topics;
    std::set<std::string> ids;
    Field current = Field::none;
    std::string line;
    std::size_t line_no = 0;

    auto target = [&]() -> std::string* {
        if (topics.empty()) return nullptr;
        Topic& t = topics.back();
        switch (current) {
            case Field::num:
                return &t.id;
            case Field::title:
                return &t.title;
            case Field::description:
                return &t.description;
            case Field::narrative:
                return &t.narrative;
            case Field::none:
                return nullptr;
        }
        return nullptr;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.front() == '#') continue;
        std::string_view rest = line;
        while (!rest.empty()) {
            const auto open = rest.find('<');
            const auto close = open == std::string_view::npos ? open : rest.find('>', open);
            std::string_view text = close == std::string_view::npos ? rest : rest.substr(0, open);
            if (!detail::trim(text).empty()) {
                std::string* field = target();
                if (field == nullptr) {
                    if (current == Field::none && topics.empty())
                        throw DataError("topic file line " + std::to_string(line_no) + ": text before first <num>");
                } else {
                    append(*field, strip_label(detail::trim(text)));
                }
            }
            if (close == std::string_view::npos) break;
            std::string tag = utf8::to_lower(rest.substr(open + 1, close - open - 1));
            rest = rest.substr(close + 1);
            if (!tag.empty() && tag.front() == '/') {
                if (tag == "/top") current = Field::none;
                continue;
            }
            const Field f = field_for(tag);
            if (f == Field::num) {
                if (!topics.empty() && topics.back().id.empty())
                    throw DataError("topic file line " + std::to_string(line_no) + ": topic without id");
                topics.emplace_back();
            } else if (tag == "top") {
                current = Field::none;
                continue;
            }
            if (f != Field::none) current = f;
        }
    }
    for (const auto& t : topics) {
        if (t.id.empty()) throw DataError("topic without id");
        if (!ids.insert(t.id).second) throw DataError("duplicate topic id " + t.id);
    }
    return topics;
}

std::vector<Topic> load_topics(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return read_topics(in);
}

}  // namespace clir

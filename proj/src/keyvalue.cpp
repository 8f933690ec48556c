#include "dcsim/keyvalue.hpp"

#include <fstream>
#include <sstream>

#include "dcsim/text.hpp"

namespace dcsim {

const KeyValue* Section::find(std::string_view key) const
{
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

std::vector<Section> parse_sections(std::string_view text)
{
    std::vector<Section> sections;
    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        auto line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            auto name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ParseError("empty section name", line_no);
            sections.push_back(Section{std::string(name), line_no, {}});
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line_no);
        if (sections.empty()) sections.push_back(Section{"", 0, {}});
        auto& current = sections.back();
        if (current.find(key)) throw ParseError("duplicate key '" + std::string(key) + "'", line_no);
        current.entries.push_back(KeyValue{std::string(key), std::string(value), line_no});
    }
    return sections;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace dcsim

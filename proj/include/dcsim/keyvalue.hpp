#pragma once

// Sectioned key-value text shared by catalog and scenario files:
//
//   # comment
//   [section]
//   key = value
//
// Sections may repeat (the catalog uses one `[vm]`/`[pm]` block per type).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcsim {

struct KeyValue {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string name;
    std::size_t line = 0;
    std::vector<KeyValue> entries;

    const KeyValue* find(std::string_view key) const;
};

/// Entries before the first header land in a section with an empty name.
std::vector<Section> parse_sections(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace dcsim

#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phasesep {

/// Plain-text experiment configuration: `[section]` headers followed by
/// `key = value` lines. `#` and `;` start comments. Keys before the first
/// header belong to the empty section.
class Config {
public:
    static Config parse(std::string_view text, std::string source = "<config>");
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    /// Comma- or whitespace-separated numbers.
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<double> get_list(const std::string& section, const std::string& key,
                                 const std::vector<double>& fallback) const;

    /// Rejects keys in `section` that are not listed, naming the offending line.
    void require_known(const std::string& section, std::initializer_list<std::string_view> keys) const;

    const std::string& source() const noexcept { return source_; }
    std::filesystem::path base_directory() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    const Entry& entry(const std::string& section, const std::string& key) const;
    [[noreturn]] void value_error(const std::string& section, const std::string& key, const std::string& what) const;

    std::string source_;
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

} // namespace phasesep

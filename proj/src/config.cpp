#include "phasesep/config.hpp"

#include "phasesep/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace phasesep {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool valid_name(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::optional<double> to_double(const std::string& s)
{
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size())
            return std::nullopt;
        return x;
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

} // namespace

Config Config::parse(std::string_view text, std::string source)
{
    Config cfg;
    cfg.source_ = std::move(source);
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    auto error = [&](const std::string& what) {
        fail(ErrorKind::Parse, cfg.source_ + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto c = line.find_first_of("#;"); c != std::string::npos)
            line.erase(c);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                error("unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!valid_name(section))
                error("invalid section name '" + section + "'");
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            error("expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!valid_name(key))
            error("invalid key '" + key + "'");
        auto& entries = cfg.sections_[section];
        if (entries.count(key))
            error("duplicate key '" + key + "'");
        entries.emplace(key, Entry{value, line_no});
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::NotFound, "config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::filesystem::path Config::base_directory() const
{
    return std::filesystem::path(source_).parent_path();
}

bool Config::has_section(const std::string& section) const { return sections_.count(section) > 0; }

bool Config::has(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

const Config::Entry& Config::entry(const std::string& section, const std::string& key) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        fail(ErrorKind::Parse, source_ + ": missing key '" + key + "' in section [" + section + "]");
    return s->second.at(key);
}

void Config::value_error(const std::string& section, const std::string& key, const std::string& what) const
{
    const auto& e = entry(section, key);
    fail(ErrorKind::Parse, source_ + ":" + std::to_string(e.line) + ": " + key + ": " + what);
}

std::string Config::get_string(const std::string& section, const std::string& key) const
{
    return entry(section, key).value;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const
{
    return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const
{
    const auto x = to_double(entry(section, key).value);
    if (!x)
        value_error(section, key, "expected a number, got '" + entry(section, key).value + "'");
    return *x;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const
{
    return has(section, key) ? get_double(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key) const
{
    const auto& v = entry(section, key).value;
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used == v.size())
            return static_cast<int>(x);
    } catch (const std::logic_error&) {
    }
    value_error(section, key, "expected an integer, got '" + v + "'");
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const
{
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const
{
    std::string v = entry(section, key).value;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream in(v);
    std::vector<double> out;
    for (std::string tok; in >> tok;) {
        const auto x = to_double(tok);
        if (!x)
            value_error(section, key, "expected a list of numbers, got '" + tok + "'");
        out.push_back(*x);
    }
    return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const
{
    return has(section, key) ? get_list(section, key) : fallback;
}

void Config::require_known(const std::string& section, std::initializer_list<std::string_view> keys) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end())
        return;
    for (const auto& [key, e] : s->second)
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(ErrorKind::Parse, source_ + ":" + std::to_string(e.line) + ": unknown key '" + key +
                                       "' in section [" + section + "]");
}

} // namespace phasesep

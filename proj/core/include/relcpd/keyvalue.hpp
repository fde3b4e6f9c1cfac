#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace relcpd {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict numeric parses; throw ParseError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

/// Flat `key=value` document. Blank lines and lines starting with '#' are
/// ignored; later keys override earlier ones.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::filesystem::path& path);

    bool contains(const std::string& key) const { return entries_.contains(key); }
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
    void erase(const std::string& key) { entries_.erase(key); }

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    /// Throws ParseError naming the first key that is neither in `allowed`
    /// nor starts with one of `allowed_prefixes`.
    void require_known(const std::set<std::string>& allowed,
                       const std::vector<std::string>& allowed_prefixes = {}) const;

    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
    std::string to_string() const;

private:
    std::map<std::string, std::string> entries_;
};

} // namespace relcpd

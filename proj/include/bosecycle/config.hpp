#pragma once

#include <map>
#include <string>
#include <vector>

namespace bosecycle {

/// Flat key-value run configuration.
///
/// Grammar, one entry per line:
///   key = value        # trailing comments are allowed
/// Keys are [A-Za-z0-9_.-]+. Blank lines and lines starting with '#' are
/// ignored. Lists are comma separated. A repeated key is an error.
class KeyValueConfig {
  public:
    static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return values_; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    std::vector<double> get_doubles(const std::string& key) const;
    std::vector<long> get_longs(const std::string& key) const;

    /// Overwrites `out` only when the key is present.
    void read(const std::string& key, double& out) const;
    void read(const std::string& key, int& out) const;
    void read(const std::string& key, long& out) const;
    void read(const std::string& key, unsigned long& out) const;
    void read(const std::string& key, std::string& out) const;
    void read(const std::string& key, std::vector<double>& out) const;
    void read(const std::string& key, std::vector<long>& out) const;

  private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

}  // namespace bosecycle

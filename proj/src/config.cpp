#include "bosecycle/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bosecycle {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

bool valid_key(const std::string& key) {
    if (key.empty()) {
        return false;
    }
    for (char c : key) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) {
        throw std::invalid_argument("config: '" + key + "' is not a number: " + v);
    }
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw std::invalid_argument("config: '" + key + "' is not an integer: " + v);
    }
    return x;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
    KeyValueConfig cfg;
    cfg.origin_ = origin;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::size_t eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) {
            throw std::invalid_argument("config " + where + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) {
            throw std::invalid_argument("config " + where + ": invalid key '" + key + "'");
        }
        if (cfg.values_.count(key) != 0) {
            throw std::invalid_argument("config " + where + ": duplicate key '" + key + "'");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("config: cannot open " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str(), path);
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw std::out_of_range("config: missing key '" + key + "'");
    }
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    return to_double(key, get_string(key));
}

long KeyValueConfig::get_long(const std::string& key) const {
    return to_long(key, get_string(key));
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& item : split_list(get_string(key))) {
        out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<long> KeyValueConfig::get_longs(const std::string& key) const {
    std::vector<long> out;
    for (const std::string& item : split_list(get_string(key))) {
        out.push_back(to_long(key, item));
    }
    return out;
}

void KeyValueConfig::read(const std::string& key, double& out) const {
    if (has(key)) {
        out = get_double(key);
    }
}

void KeyValueConfig::read(const std::string& key, int& out) const {
    if (has(key)) {
        out = static_cast<int>(get_long(key));
    }
}

void KeyValueConfig::read(const std::string& key, long& out) const {
    if (has(key)) {
        out = get_long(key);
    }
}

void KeyValueConfig::read(const std::string& key, unsigned long& out) const {
    if (has(key)) {
        const long v = get_long(key);
        if (v < 0) {
            throw std::invalid_argument("config: '" + key + "' must be nonnegative");
        }
        out = static_cast<unsigned long>(v);
    }
}

void KeyValueConfig::read(const std::string& key, std::string& out) const {
    if (has(key)) {
        out = get_string(key);
    }
}

void KeyValueConfig::read(const std::string& key, std::vector<double>& out) const {
    if (has(key)) {
        out = get_doubles(key);
    }
}

void KeyValueConfig::read(const std::string& key, std::vector<long>& out) const {
    if (has(key)) {
        out = get_longs(key);
    }
}

}  // namespace bosecycle

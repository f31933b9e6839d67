#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include "qpreth/common.hpp"

namespace qpreth {

/// Minimal TOML-style configuration reader covering what the experiment
/// driver needs: [section] headers, key = value lines, values that are
/// numbers, booleans, quoted strings, or flat arrays of those, and #
/// comments. Overrides of the form section.key=value patch the parsed tree.
class Config {
  public:
    using Scalar = std::variant<double, bool, std::string>;
    struct Value {
        bool is_array = false;
        std::vector<Scalar> items;  // scalars hold exactly one item
    };

    static Config parse_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw config_error("config: cannot open " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_text(ss.str());
    }

    static Config parse_text(const std::string& text) {
        Config cfg;
        cfg.raw_text_ = text;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = strip_comment(line);
            s = trim(s);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') throw config_error("config: bad section header at line " + std::to_string(lineno));
                section = trim(s.substr(1, s.size() - 2));
                if (section.empty()) throw config_error("config: empty section name at line " + std::to_string(lineno));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos) throw config_error("config: expected key = value at line " + std::to_string(lineno));
            std::string key = trim(s.substr(0, eq));
            std::string val = trim(s.substr(eq + 1));
            if (key.empty() || val.empty()) throw config_error("config: empty key or value at line " + std::to_string(lineno));
            cfg.data_[section][key] = parse_value(val, lineno);
        }
        return cfg;
    }

    /// Apply "section.key=value" override strings.
    void apply_overrides(const std::vector<std::string>& overrides) {
        for (const auto& ov : overrides) {
            auto eq = ov.find('=');
            if (eq == std::string::npos) throw config_error("override must be section.key=value: " + ov);
            std::string path = trim(ov.substr(0, eq));
            std::string val = trim(ov.substr(eq + 1));
            auto dotpos = path.rfind('.');
            std::string section = dotpos == std::string::npos ? "" : path.substr(0, dotpos);
            std::string key = dotpos == std::string::npos ? path : path.substr(dotpos + 1);
            data_[section][key] = parse_value(val, 0);
            raw_text_ += "\n# override: " + ov;
        }
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = data_.find(section);
        return s != data_.end() && s->second.count(key) > 0;
    }

    double number(const std::string& section, const std::string& key) const {
        const Scalar& s = scalar(section, key);
        if (!std::holds_alternative<double>(s)) throw config_error("config: " + section + "." + key + " must be a number");
        return std::get<double>(s);
    }

    double number_or(const std::string& section, const std::string& key, double dflt) const {
        return has(section, key) ? number(section, key) : dflt;
    }

    long integer(const std::string& section, const std::string& key) const {
        double v = number(section, key);
        long n = static_cast<long>(std::llround(v));
        if (std::abs(v - n) > 1e-9) throw config_error("config: " + section + "." + key + " must be an integer");
        return n;
    }

    long integer_or(const std::string& section, const std::string& key, long dflt) const {
        return has(section, key) ? integer(section, key) : dflt;
    }

    bool boolean_or(const std::string& section, const std::string& key, bool dflt) const {
        if (!has(section, key)) return dflt;
        const Scalar& s = scalar(section, key);
        if (!std::holds_alternative<bool>(s)) throw config_error("config: " + section + "." + key + " must be a boolean");
        return std::get<bool>(s);
    }

    std::string text(const std::string& section, const std::string& key) const {
        const Scalar& s = scalar(section, key);
        if (!std::holds_alternative<std::string>(s)) throw config_error("config: " + section + "." + key + " must be a string");
        return std::get<std::string>(s);
    }

    std::string text_or(const std::string& section, const std::string& key, const std::string& dflt) const {
        return has(section, key) ? text(section, key) : dflt;
    }

    std::vector<double> numbers(const std::string& section, const std::string& key) const {
        const Value& v = value(section, key);
        std::vector<double> out;
        for (const auto& s : v.items) {
            if (!std::holds_alternative<double>(s))
                throw config_error("config: " + section + "." + key + " must be numeric");
            out.push_back(std::get<double>(s));
        }
        return out;
    }

    const std::string& raw_text() const { return raw_text_; }

    /// FNV-1a of the raw config text plus overrides (manifest provenance).
    std::string hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : raw_text_) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

  private:
    const Value& value(const std::string& section, const std::string& key) const {
        auto s = data_.find(section);
        if (s == data_.end() || !s->second.count(key))
            throw config_error("config: missing " + (section.empty() ? key : section + "." + key));
        return s->second.at(key);
    }

    const Scalar& scalar(const std::string& section, const std::string& key) const {
        const Value& v = value(section, key);
        if (v.is_array || v.items.size() != 1)
            throw config_error("config: " + section + "." + key + " must be a scalar");
        return v.items[0];
    }

    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }

    static std::string strip_comment(const std::string& s) {
        bool in_str = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"') in_str = !in_str;
            if (s[i] == '#' && !in_str) return s.substr(0, i);
        }
        return s;
    }

    static Scalar parse_scalar(const std::string& tok, int) {
        if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') return tok.substr(1, tok.size() - 2);
        if (tok == "true") return true;
        if (tok == "false") return false;
        try {
            std::size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos == tok.size()) return v;
        } catch (...) {
        }
        return tok;  // bare string (quotes optional; needed for values with spaces)
    }

    static Value parse_value(const std::string& val, int lineno) {
        Value v;
        if (val.front() == '[') {
            if (val.back() != ']') throw config_error("config: unterminated array at line " + std::to_string(lineno));
            v.is_array = true;
            std::string body = val.substr(1, val.size() - 2);
            std::string tok;
            std::istringstream in(body);
            while (std::getline(in, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) v.items.push_back(parse_scalar(tok, lineno));
            }
        } else {
            v.items.push_back(parse_scalar(val, lineno));
        }
        return v;
    }

    std::map<std::string, std::map<std::string, Value>> data_;
    std::string raw_text_;
};

}  // namespace qpreth

#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace featfield {

/// Configuration problem; the message names the offending key and line.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {
inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}
}  // namespace detail

/**
 * @brief Minimal INI document: ordered sections of key = value lines.
 *
 * Keeps source line numbers for diagnostics and allows repeated keys, which
 * the scenario schema uses for feature and cluster lists. Comment lines
 * start with '#' or ';'.
 */
class IniDocument {
  public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };
    struct Section {
        std::string name;
        int line = 0;
        std::vector<Entry> entries;
    };

    static IniDocument parse(const std::string& text, const std::string& origin = "<string>") {
        IniDocument doc;
        doc.origin_ = origin;
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        Section* current = nullptr;
        while (std::getline(in, raw)) {
            ++line_no;
            const std::string line = detail::trim(raw);
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(line_no) +
                                      ": unterminated section header '" + line + "'");
                Section s;
                s.name = detail::trim(std::string_view(line).substr(1, line.size() - 2));
                if (s.name.empty())
                    throw ConfigError(origin + ":" + std::to_string(line_no) +
                                      ": empty section name");
                s.line = line_no;
                doc.sections_.push_back(std::move(s));
                current = &doc.sections_.back();
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
            if (!current)
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": key outside of any [section]");
            Entry e;
            e.key = detail::trim(std::string_view(line).substr(0, eq));
            e.value = detail::trim(std::string_view(line).substr(eq + 1));
            e.line = line_no;
            if (e.key.empty())
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
            current->entries.push_back(std::move(e));
        }
        return doc;
    }

    static IniDocument load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path);
    }

    const std::string& origin() const { return origin_; }

    const Section* find(std::string_view name) const {
        for (const Section& s : sections_)
            if (s.name == name) return &s;
        return nullptr;
    }

    bool has(std::string_view section, std::string_view key) const {
        return lookup(section, key) != nullptr;
    }

    /// All values of a repeated key, in file order, with their line numbers.
    std::vector<Entry> all(std::string_view section, std::string_view key) const {
        std::vector<Entry> out;
        if (const Section* s = find(section))
            for (const Entry& e : s->entries)
                if (e.key == key) out.push_back(e);
        return out;
    }

    std::string get_string(std::string_view section, std::string_view key) const {
        const Entry* e = lookup(section, key);
        if (!e) throw missing(section, key);
        return e->value;
    }

    std::string get_string(std::string_view section, std::string_view key,
                           const std::string& fallback) const {
        const Entry* e = lookup(section, key);
        return e ? e->value : fallback;
    }

    double get_double(std::string_view section, std::string_view key) const {
        const Entry* e = lookup(section, key);
        if (!e) throw missing(section, key);
        return to_double(*e, section);
    }

    double get_double(std::string_view section, std::string_view key, double fallback) const {
        const Entry* e = lookup(section, key);
        return e ? to_double(*e, section) : fallback;
    }

    long get_int(std::string_view section, std::string_view key, long fallback) const {
        const Entry* e = lookup(section, key);
        if (!e) return fallback;
        const std::string& v = e->value;
        long out = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError(origin_ + ":" + std::to_string(e->line) + ": key '" +
                              std::string(section) + "." + std::string(key) +
                              "' is not an integer: '" + v + "'");
        return out;
    }

    long get_int(std::string_view section, std::string_view key) const {
        if (!lookup(section, key)) throw missing(section, key);
        return get_int(section, key, 0);
    }

    /// Comma-separated doubles, e.g. "0.5, 1.25".
    std::vector<double> get_doubles(std::string_view section, std::string_view key) const {
        const Entry* e = lookup(section, key);
        if (!e) throw missing(section, key);
        return split_doubles(*e, section);
    }

    std::vector<double> split_doubles(const Entry& e, std::string_view section) const {
        std::vector<double> out;
        std::string_view rest = e.value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string item =
                detail::trim(comma == std::string_view::npos ? rest : rest.substr(0, comma));
            if (item.empty())
                throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                                  std::string(section) + "." + e.key + "' has an empty element");
            try {
                std::size_t used = 0;
                out.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                                  std::string(section) + "." + e.key +
                                  "' is not a number list: '" + e.value + "'");
            }
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    /// Set (or create) a key; used by command-line overrides.
    void set(std::string_view section, std::string_view key, std::string_view value) {
        Section* s = nullptr;
        for (Section& cand : sections_)
            if (cand.name == section) { s = &cand; break; }
        if (!s) {
            sections_.push_back({std::string(section), 0, {}});
            s = &sections_.back();
        }
        for (Entry& e : s->entries)
            if (e.key == key) {
                e.value = std::string(value);
                return;
            }
        s->entries.push_back({std::string(key), std::string(value), 0});
    }

    std::string serialize() const {
        std::ostringstream out;
        bool first = true;
        for (const Section& s : sections_) {
            if (!first) out << "\n";
            first = false;
            out << "[" << s.name << "]\n";
            for (const Entry& e : s.entries) out << e.key << " = " << e.value << "\n";
        }
        return out.str();
    }

    const std::vector<Section>& sections() const { return sections_; }

  private:
    const Entry* lookup(std::string_view section, std::string_view key) const {
        const Section* s = find(section);
        if (!s) return nullptr;
        for (const Entry& e : s->entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    ConfigError missing(std::string_view section, std::string_view key) const {
        return ConfigError(origin_ + ": missing required key '" + std::string(section) + "." +
                           std::string(key) + "'");
    }

    double to_double(const Entry& e, std::string_view section) const {
        try {
            std::size_t used = 0;
            const double out = std::stod(e.value, &used);
            if (used != e.value.size()) throw std::invalid_argument(e.value);
            return out;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": key '" +
                              std::string(section) + "." + e.key + "' is not a number: '" +
                              e.value + "'");
        }
    }

    std::string origin_ = "<string>";
    std::vector<Section> sections_;
};

}  // namespace featfield

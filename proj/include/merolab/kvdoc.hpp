// kvdoc.hpp — the flat key-value text document shared by all on-disk formats
// (function specs, approximants, measures, chains, experiment configs).
// Lines are "key = value"; '#' starts a comment; keys are unique. Writing is
// canonical (keys sorted), which both makes round-trips stable and gives the
// cache a well-defined content hash for value-identical documents.

#pragma once

#include <cstdio>
#include <map>
#include <sstream>

#include "common.hpp"

namespace merolab {

struct KvDoc {
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }

    void set(const std::string& k, const std::string& v) { kv[k] = v; }
    void set_double(const std::string& k, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        kv[k] = buf;
    }
    void set_int(const std::string& k, long v) { kv[k] = std::to_string(v); }
    void set_complex_list(const std::string& k, const std::vector<cxd>& zs) {
        std::string s;
        for (std::size_t i = 0; i < zs.size(); ++i) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", zs[i].re, zs[i].im);
            if (i) s += ";";
            s += buf;
        }
        kv[k] = s;
    }

    const std::string& get(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) throw config_error("missing key: " + k);
        return it->second;
    }
    std::string get_or(const std::string& k, const std::string& dflt) const {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    double get_double(const std::string& k) const {
        const std::string& s = get(k);
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str()) throw config_error("bad number for key " + k + ": " + s);
        return v;
    }
    double get_double_or(const std::string& k, double dflt) const {
        return has(k) ? get_double(k) : dflt;
    }
    long get_int(const std::string& k) const { return std::strtol(get(k).c_str(), nullptr, 10); }
    long get_int_or(const std::string& k, long dflt) const { return has(k) ? get_int(k) : dflt; }
    std::vector<cxd> get_complex_list(const std::string& k) const {
        std::vector<cxd> out;
        if (!has(k)) return out;
        std::stringstream ss(get(k));
        std::string item;
        while (std::getline(ss, item, ';')) {
            if (item.empty()) continue;
            double re = 0, im = 0;
            if (std::sscanf(item.c_str(), "%lf,%lf", &re, &im) != 2)
                throw config_error("bad complex entry in " + k + ": " + item);
            out.emplace_back(re, im);
        }
        return out;
    }

    std::string to_string() const {
        std::string out;
        for (const auto& [k, v] : kv) {
            out += k;
            out += " = ";
            out += v;
            out += "\n";
        }
        return out;
    }

    static KvDoc parse(const std::string& text) {
        KvDoc doc;
        std::stringstream ss(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto notspace = [](unsigned char c) { return !std::isspace(c); };
            auto b = std::find_if(line.begin(), line.end(), notspace);
            if (b == line.end()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw config_error("line " + std::to_string(lineno) + ": expected key = value");
            auto trim = [&](std::string s) {
                std::size_t i = 0, j = s.size();
                while (i < j && std::isspace((unsigned char)s[i])) ++i;
                while (j > i && std::isspace((unsigned char)s[j - 1])) --j;
                return s.substr(i, j - i);
            };
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
            if (doc.kv.count(key))
                throw config_error("duplicate key: " + key);
            doc.kv[key] = val;
        }
        return doc;
    }
};

}  // namespace merolab

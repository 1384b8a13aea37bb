#ifndef CHURN_CSV_HPP
#define CHURN_CSV_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace churn {

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace csv {

inline std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/// Reads a whole CSV file; first row is the header. Empty lines skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line per row

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }

    int require_column(const std::string& name) const {
        int c = column(name);
        if (c < 0) throw DataError("missing required column: " + name);
        return c;
    }
};

inline Table read(std::istream& is, const std::string& what = "csv") {
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto row = split_row(line);
        if (t.header.empty()) {
            t.header = std::move(row);
        } else {
            if (row.size() != t.header.size())
                throw DataError(what + " line " + std::to_string(lineno) + ": expected " +
                                std::to_string(t.header.size()) + " fields, got " +
                                std::to_string(row.size()));
            t.rows.push_back(std::move(row));
            t.line_numbers.push_back(lineno);
        }
    }
    if (t.header.empty()) throw DataError(what + ": empty file, header required");
    return t;
}

inline Table read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    return read(is, path);
}

/// Shortest round-trippable decimal representation of a double.
inline std::string format_double(double x) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back;
        std::sscanf(buf, "%lf", &back);
        if (back == x) break;
    }
    return buf;
}

inline double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("bad numeric value '" + s + "' in " + context);
    }
}

inline long long parse_int(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DataError("bad integer value '" + s + "' in " + context);
    }
}

}  // namespace csv
}  // namespace churn

#endif  // CHURN_CSV_HPP

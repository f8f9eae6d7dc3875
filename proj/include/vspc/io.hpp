#pragma once
// Text formats: edge lists ("n" line, then "u v" pairs) and ownership files
// ("u v owner" triples). '#' starts a comment anywhere on a line. All parse
// failures throw ParseError carrying the 1-based line number.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "game.hpp"
#include "graph.hpp"

namespace vspc {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

namespace detail {

/** Strips comments/whitespace; returns false for lines with no content. */
inline bool data_line(std::string& s) {
    if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return false;
    size_t b = s.find_last_not_of(" \t\r\n");
    s = s.substr(a, b - a + 1);
    return true;
}

inline void parse_ints(const std::string& s, int line_no, int* out, int count) {
    std::istringstream iss(s);
    for (int k = 0; k < count; ++k)
        if (!(iss >> out[k]))
            throw ParseError("expected " + std::to_string(count) + " integers, got \"" + s + "\"",
                             line_no);
    std::string extra;
    if (iss >> extra) throw ParseError("trailing content \"" + extra + "\"", line_no);
}

}  // namespace detail

inline Graph read_edge_list(std::istream& in) {
    std::string s;
    int line_no = 0;
    int n = -1;
    Graph g(1);
    while (std::getline(in, s)) {
        ++line_no;
        if (!detail::data_line(s)) continue;
        if (n < 0) {
            detail::parse_ints(s, line_no, &n, 1);
            if (n < 1 || n > kMaxNodes)
                throw ParseError("node count " + std::to_string(n) + " outside [1, 64]", line_no);
            g = Graph(n);
            continue;
        }
        int uv[2];
        detail::parse_ints(s, line_no, uv, 2);
        if (uv[0] < 0 || uv[0] >= n || uv[1] < 0 || uv[1] >= n)
            throw ParseError("node id outside [0, " + std::to_string(n - 1) + "]", line_no);
        if (uv[0] == uv[1]) throw ParseError("self-loop " + s, line_no);
        g.add_link(uv[0], uv[1]);
    }
    if (n < 0) throw ParseError("missing node-count line", line_no + 1);
    return g;
}

inline Graph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_edge_list(in);
}

/** Ownership triples for g's links; validates single full coverage. */
inline OwnershipProfile read_ownership(std::istream& in, const Graph& g) {
    std::string s;
    int line_no = 0;
    OwnershipProfile own(g.n());
    while (std::getline(in, s)) {
        ++line_no;
        if (!detail::data_line(s)) continue;
        int t[3];
        detail::parse_ints(s, line_no, t, 3);
        int u = t[0], v = t[1], o = t[2];
        if (u < 0 || u >= g.n() || v < 0 || v >= g.n())
            throw ParseError("node id outside [0, " + std::to_string(g.n() - 1) + "]", line_no);
        if (!g.has_link(u, v)) throw ParseError("no such link " + s, line_no);
        if (o != u && o != v) throw ParseError("owner must be an endpoint: " + s, line_no);
        if (own.owner_of(u, v) >= 0) throw ParseError("duplicate ownership for link " + s, line_no);
        own.claim(o, o == u ? v : u);
    }
    try {
        own.validate_against(g);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no + 1);
    }
    return own;
}

inline OwnershipProfile read_ownership_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_ownership(in, g);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
    out << g.n() << "\n";
    for (auto [u, v] : g.links()) out << u << " " << v << "\n";
}

}  // namespace vspc

#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sn {

SystemStructure parse_edge_list(const std::string& text) {
    SystemStructure s;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int max_node = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        int src, dst;
        if (!(ls >> src)) continue;  // blank / comment-only line
        if (!(ls >> dst))
            throw ParseError("edge list: expected 'src dst [weight]'", line_no);
        if (src < 1 || dst < 1)
            throw ParseError("edge list: node indices must be 1-indexed positive", line_no);
        StructEdge e;
        e.src = src;
        e.dst = dst;
        double w;
        if (ls >> w) {
            e.weight = w;
            e.has_weight = true;
        }
        std::string trailing;
        if (ls >> trailing)
            throw ParseError("edge list: trailing tokens after weight", line_no);
        max_node = std::max({max_node, src, dst});
        s.edges.push_back(e);
    }
    if (s.edges.empty()) throw ParseError("edge list: no edges found", line_no);
    s.n = max_node;
    return s;
}

SystemStructure load_edge_list(const std::string& path) {
    return parse_edge_list(read_file(path));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_matrix(const Eigen::MatrixXd& M) {
    std::string out;
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            if (j) out += ' ';
            out += format_double(M(i, j));
        }
        out += '\n';
    }
    return out;
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (row.empty()) continue;
        if (!rows.empty() && rows.front().size() != row.size())
            throw ParseError("matrix: ragged rows", line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix: no data", line_no);
    Eigen::MatrixXd M(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return M;
}

std::string format_int_matrix(const Eigen::MatrixXd& M) {
    std::string out;
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) {
            if (j) out += ' ';
            out += (M(i, j) != 0.0) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

std::string format_index_list(const std::vector<int>& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(idx[i]);
    }
    out += '\n';
    return out;
}

std::string format_gain(const GainMatrix& gain, int n, double epsilon) {
    std::ostringstream os;
    os << gain.blocks.size() << ' ' << n << ' ' << format_double(epsilon) << ' '
       << format_double(gain.achieved_radius) << '\n';
    for (const auto& b : gain.blocks) os << format_matrix(b);
    return os.str();
}

GainMatrix parse_gain(const std::string& text) {
    std::istringstream in(text);
    int N, n;
    double eps, rho;
    if (!(in >> N >> n >> eps >> rho))
        throw ParseError("gain file: bad header", 1);
    GainMatrix g;
    g.achieved_radius = rho;
    g.assembled = Eigen::MatrixXd::Zero(n * N, n * N);
    for (int b = 0; b < N; ++b) {
        Eigen::MatrixXd blk(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(in >> blk(i, j)))
                    throw ParseError("gain file: truncated block", b + 2);
        g.blocks.push_back(blk);
        g.assembled.block(b * n, b * n, n, n) = blk;
    }
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot write file: " + path);
    out << contents;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string fnv1a_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(data)));
    return buf;
}

} // namespace sn

#pragma once

// Minimal spanning trees over correlation distances. The metric
// d_AB = sqrt((1 - C_AB) / 2) maps correlation 1 to distance 0 and
// correlation -1 to distance 1. Trees are built with Kruskal's algorithm
// over a total edge order (distance, then currency codes), so the result is
// unique and reproducible even in the presence of exact ties.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fxnet/matrix.hpp"
#include "fxnet/spectrum.hpp"

namespace fxnet {

struct DistanceMatrix {
    CurrencyCode base;
    std::vector<CurrencyCode> currencies;
    Matrix values;  // N x N, zero diagonal
};

/// Convert correlations to distances. Correlations may drift outside [-1, 1]
/// by a hair of rounding; anything within 1e-10 of the range is clamped,
/// anything further out is an error in the caller's matrix.
inline DistanceMatrix distance_matrix(const CorrelationMatrix& corr) {
    const std::size_t n = corr.currencies.size();
    DistanceMatrix dist;
    dist.base = corr.base;
    dist.currencies = corr.currencies;
    dist.values = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double c = corr.values(i, j);
            if (c > 1.0 || c < -1.0) {
                if (c > 1.0 + 1e-10 || c < -1.0 - 1e-10)
                    throw Error("correlation entry outside [-1, 1]");
                c = std::clamp(c, -1.0, 1.0);
            }
            const double d = std::sqrt((1.0 - c) / 2.0);
            dist.values(i, j) = d;
            dist.values(j, i) = d;
        }
    }
    return dist;
}

struct TreeEdge {
    CurrencyCode a;  // lexicographically smaller endpoint
    CurrencyCode b;
    double distance = 0.0;
};

struct SpanningTree {
    CurrencyCode base;
    std::vector<CurrencyCode> currencies;
    std::vector<TreeEdge> edges;           // N - 1 edges, sorted by (a, b)
    std::map<CurrencyCode, int> degree;    // leg count per node, every count >= 1
};

namespace detail {

/// Union-find over vertex indices, with path halving and union by size.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (size_[x] < size_[y]) std::swap(x, y);
        parent_[y] = x;
        size_[x] += size_[y];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace detail

/// Kruskal's algorithm. Candidate edges are ordered by distance with ties
/// broken on the endpoint codes (smaller code first within each edge), which
/// makes the chosen tree independent of input row order.
inline SpanningTree build_mst(const DistanceMatrix& dist) {
    const std::size_t n = dist.currencies.size();
    if (n < 2) throw Error("build_mst requires at least 2 currencies");

    struct Candidate {
        double d;
        CurrencyCode a;
        CurrencyCode b;
        std::size_t i;
        std::size_t j;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            CurrencyCode a = dist.currencies[i];
            CurrencyCode b = dist.currencies[j];
            std::size_t ii = i;
            std::size_t jj = j;
            if (b < a) {
                std::swap(a, b);
                std::swap(ii, jj);
            }
            candidates.push_back({dist.values(i, j), a, b, ii, jj});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    SpanningTree tree;
    tree.base = dist.base;
    tree.currencies = dist.currencies;
    for (const CurrencyCode& code : dist.currencies) tree.degree[code] = 0;
    detail::DisjointSets sets(n);
    for (const Candidate& c : candidates) {
        if (sets.unite(c.i, c.j)) {
            tree.edges.push_back({c.a, c.b, c.d});
            ++tree.degree[c.a];
            ++tree.degree[c.b];
            if (tree.edges.size() == n - 1) break;
        }
    }
    if (tree.edges.size() != n - 1) throw Error("build_mst: graph is not connected");
    std::sort(tree.edges.begin(), tree.edges.end(), [](const TreeEdge& x, const TreeEdge& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return tree;
}

struct DegreeDistribution {
    std::map<int, int> counts;       // K -> number of nodes with exactly K legs
    std::vector<double> cumulative;  // cumulative[K-1] = F(K), for K = 1..k_max
    int k_max = 0;
    double mean_degree = 0.0;
    std::size_t node_count = 0;

    double f(int k) const {
        if (k < 1 || k > k_max) throw Error("F(K) queried outside 1..k_max");
        return cumulative[static_cast<std::size_t>(k - 1)];
    }
};

/// Degree counts and the cumulative distribution F(K) = (1/N) * number of
/// nodes with K or more legs, defined at every integer K from 1 to the
/// maximum degree (including K whose exact count is zero).
inline DegreeDistribution degree_distribution(std::span<const int> degrees) {
    if (degrees.empty()) throw Error("degree_distribution: empty degree sequence");
    DegreeDistribution dd;
    dd.node_count = degrees.size();
    long long total = 0;
    for (const int d : degrees) {
        if (d < 1) throw Error("degree_distribution: degree below 1");
        ++dd.counts[d];
        total += d;
    }
    dd.k_max = dd.counts.rbegin()->first;
    const double n = static_cast<double>(degrees.size());
    dd.mean_degree = static_cast<double>(total) / n;
    dd.cumulative.resize(static_cast<std::size_t>(dd.k_max));
    // Walk K downward so each F(K) is the running tail count above it.
    long long tail = 0;
    auto it = dd.counts.rbegin();
    for (int k = dd.k_max; k >= 1; --k) {
        while (it != dd.counts.rend() && it->first >= k) {
            tail += it->second;
            ++it;
        }
        dd.cumulative[static_cast<std::size_t>(k - 1)] = static_cast<double>(tail) / n;
    }
    return dd;
}

inline DegreeDistribution degree_distribution(const SpanningTree& tree) {
    std::vector<int> degrees;
    degrees.reserve(tree.currencies.size());
    for (const CurrencyCode& code : tree.currencies) degrees.push_back(tree.degree.at(code));
    return degree_distribution(degrees);
}

/// Edge list as CSV: `a,b,distance` rows sorted lexicographically, distances
/// to 6 decimals.
inline std::string tree_csv(const SpanningTree& tree) {
    std::vector<TreeEdge> edges = tree.edges;
    std::sort(edges.begin(), edges.end(), [](const TreeEdge& x, const TreeEdge& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::string out = "a,b,distance\n";
    for (const TreeEdge& e : edges) {
        out += e.a.str();
        out += ',';
        out += e.b.str();
        out += ',';
        out += format_fixed(e.distance, 6);
        out += '\n';
    }
    return out;
}

/// Graphviz rendering of the tree; node labels are the currency codes and
/// edge labels carry the distances to 6 decimals.
inline std::string tree_dot(const SpanningTree& tree) {
    std::vector<TreeEdge> edges = tree.edges;
    std::sort(edges.begin(), edges.end(), [](const TreeEdge& x, const TreeEdge& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::string out = "graph mst_" + tree.base.str() + " {\n";
    out += "  layout=neato;\n  node [shape=ellipse, fontsize=10];\n";
    for (const TreeEdge& e : edges) {
        out += "  " + e.a.str() + " -- " + e.b.str() + " [label=\"" +
               format_fixed(e.distance, 6) + "\"];\n";
    }
    out += "}\n";
    return out;
}

/// Serialize a tree in one of the supported formats: "dot" or "edge-csv".
inline std::string export_tree(const SpanningTree& tree, std::string_view format) {
    if (format == "dot") return tree_dot(tree);
    if (format == "edge-csv") return tree_csv(tree);
    throw Error("unknown tree export format '" + std::string(format) + "'");
}

/// Parse the edge-csv format back into edges (for tests and tooling).
inline std::vector<TreeEdge> parse_edge_csv(std::string_view text) {
    std::vector<TreeEdge> edges;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "a,b,distance") throw Error("unexpected edge CSV header");
            continue;
        }
        const std::vector<std::string_view> fields = detail::split(line, ',');
        if (fields.size() != 3) throw Error("edge CSV row needs 3 fields");
        edges.push_back({CurrencyCode::parse(fields[0]), CurrencyCode::parse(fields[1]),
                         parse_double(fields[2])});
    }
    return edges;
}

/// Degree distribution as CSV: `K,N_prime,F`, one row per integer K from 1
/// to k_max (unoccupied K keep a zero count; F stays well-defined).
inline std::string degree_csv(const DegreeDistribution& dd) {
    std::string out = "K,N_prime,F\n";
    for (int k = 1; k <= dd.k_max; ++k) {
        const auto it = dd.counts.find(k);
        const int count = it == dd.counts.end() ? 0 : it->second;
        out += std::to_string(k);
        out += ',';
        out += std::to_string(count);
        out += ',';
        out += format_double(dd.f(k));
        out += '\n';
    }
    return out;
}

}  // namespace fxnet

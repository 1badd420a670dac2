#include "pcosync/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pcosync {

Topology::Topology(int n, const std::vector<std::pair<int, int>>& edges, std::vector<double> global_gains,
                   double local_strength, double period, std::vector<double> natural_freq_offsets)
    : n_(n),
      global_gains_(std::move(global_gains)),
      local_strength_(local_strength),
      period_(period),
      natural_freq_offsets_(std::move(natural_freq_offsets)) {
    if (n_ <= 0) throw std::invalid_argument("topology: n must be positive");
    if (static_cast<int>(global_gains_.size()) != n_)
        throw std::invalid_argument("topology: g must have length n");
    for (double g : global_gains_)
        if (!(g >= 0.0)) throw std::invalid_argument("topology: all global gains must be >= 0");
    if (!(local_strength_ >= 0.0)) throw std::invalid_argument("topology: local strength must be >= 0");
    if (!(period_ > 0.0)) throw std::invalid_argument("topology: period must be positive");
    if (natural_freq_offsets_.empty()) natural_freq_offsets_.assign(n_, 0.0);
    if (static_cast<int>(natural_freq_offsets_.size()) != n_)
        throw std::invalid_argument("topology: delta must have length n");

    adjacency_.assign(static_cast<std::size_t>(n_) * n_, 0);
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw std::invalid_argument("topology: edge index out of range");
        if (i == j) throw std::invalid_argument("topology: self-loops are not allowed");
        auto key = std::minmax(i, j);
        if (!seen.insert(key).second)
            throw std::invalid_argument("topology: duplicate edge (" + std::to_string(key.first) + "," +
                                        std::to_string(key.second) + ")");
        adjacency_[static_cast<std::size_t>(i) * n_ + j] = 1;
        adjacency_[static_cast<std::size_t>(j) * n_ + i] = 1;
    }
    edges_.assign(seen.begin(), seen.end());

    neighbor_index_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) {
        std::size_t deg = 0;
        for (int j = 0; j < n_; ++j) deg += adjacency_[static_cast<std::size_t>(i) * n_ + j];
        neighbor_index_[i + 1] = neighbor_index_[i] + deg;
    }
    neighbors_.resize(neighbor_index_[n_]);
    std::vector<std::size_t> cursor(neighbor_index_.begin(), neighbor_index_.end() - 1);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (adjacency_[static_cast<std::size_t>(i) * n_ + j]) neighbors_[cursor[i]++] = j;
}

int Topology::max_degree() const {
    int m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, degree(i));
    return m;
}

double Topology::max_gain() const { return *std::max_element(global_gains_.begin(), global_gains_.end()); }
double Topology::min_gain() const { return *std::min_element(global_gains_.begin(), global_gains_.end()); }

Topology Topology::with_gains(std::vector<double> gains) const {
    return Topology(n_, edges_, std::move(gains), local_strength_, period_, natural_freq_offsets_);
}

Topology Topology::with_uniform_gain(double g) const {
    return with_gains(std::vector<double>(n_, g));
}

Topology Topology::with_local_strength(double l) const {
    return Topology(n_, edges_, global_gains_, l, period_, natural_freq_offsets_);
}

std::vector<std::string> Topology::advisories() const {
    std::vector<std::string> out;
    if (local_strength_ >= 0.1)
        out.push_back("local strength l = " + std::to_string(local_strength_) +
                      " is outside the weak-coupling regime (expect l << 1)");
    for (int i = 0; i < n_; ++i)
        if (global_gains_[i] >= 0.1) {
            out.push_back("gain g[" + std::to_string(i) + "] = " + std::to_string(global_gains_[i]) +
                          " is outside the weak-coupling regime (expect g << 1)");
            break;
        }
    return out;
}

Topology Topology::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {"n", "edges", "g", "l", "T", "delta"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw std::invalid_argument("topology: unknown key \"" + it.key() + "\"");
    for (const char* key : {"n", "edges", "g", "l", "T"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("topology: missing key \"") + key + "\"");

    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("topology: edges must be [i, j] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    auto gains = j.at("g").get<std::vector<double>>();
    std::vector<double> delta;
    if (j.contains("delta")) delta = j.at("delta").get<std::vector<double>>();
    return Topology(n, edges, std::move(gains), j.at("l").get<double>(), j.at("T").get<double>(),
                    std::move(delta));
}

Topology Topology::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("topology: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("topology: bad JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json Topology::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    auto& je = j["edges"] = nlohmann::json::array();
    for (auto [a, b] : edges_) je.push_back({a, b});
    j["g"] = global_gains_;
    j["l"] = local_strength_;
    j["T"] = period_;
    bool any_delta = false;
    for (double d : natural_freq_offsets_) any_delta |= (d != 0.0);
    if (any_delta) j["delta"] = natural_freq_offsets_;
    return j;
}

Topology Topology::desk18() {
    // Fixed desk-scale network: 18 nodes placed uniformly in the unit square
    // (numpy RandomState seed 20), connected within radius 0.33. Frozen as a
    // literal edge list; mean degree 4, min degree 2, connected.
    static const std::vector<std::pair<int, int>> kEdges = {
        {0, 1},  {0, 6},   {0, 10},  {0, 13},  {0, 15},  {1, 6},   {1, 10},  {1, 13},  {1, 15},
        {2, 5},  {2, 8},   {3, 5},   {3, 9},   {3, 14},  {3, 15},  {4, 7},   {4, 11},  {4, 12},
        {4, 17}, {5, 8},   {5, 14},  {6, 10},  {6, 13},  {6, 15},  {7, 11},  {9, 14},  {9, 16},
        {10, 13}, {11, 16}, {12, 14}, {12, 15}, {12, 17}, {13, 15}, {14, 15}, {14, 17}, {15, 17}};
    return Topology(18, kEdges, std::vector<double>(18, 0.0), 0.0, 1.0);
}

Matrix incidence_matrix(const Topology& topo) {
    const auto& edges = topo.edges();
    Matrix b(topo.n(), edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        b(edges[e].first, e) = 1.0;
        b(edges[e].second, e) = -1.0;
    }
    return b;
}

Matrix laplacian(const Topology& topo) {
    const int n = topo.n();
    Matrix lap(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = topo.degree(i);
        for (const int* p = topo.neighbors_begin(i); p != topo.neighbors_end(i); ++p) lap(i, *p) = -1.0;
    }
    return lap;
}

bool is_connected(const Topology& topo) {
    const int n = topo.n();
    if (n == 1) return true;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop();
        for (const int* p = topo.neighbors_begin(i); p != topo.neighbors_end(i); ++p)
            if (!seen[*p]) {
                seen[*p] = 1;
                ++count;
                q.push(*p);
            }
    }
    return count == n;
}

}  // namespace pcosync

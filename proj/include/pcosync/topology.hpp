#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pcosync/matrix.hpp"

namespace pcosync {

/// Coupling structure of an oscillator network: a symmetric 0/1 local
/// adjacency, per-node gains toward the global cue, a single local coupling
/// strength and the cue period. Immutable in spirit: build once, share
/// freely.
class Topology {
public:
    Topology(int n, const std::vector<std::pair<int, int>>& edges, std::vector<double> global_gains,
             double local_strength, double period, std::vector<double> natural_freq_offsets = {});

    static Topology from_json(const nlohmann::json& j);
    static Topology from_json_file(const std::string& path);
    nlohmann::json to_json() const;

    /// The default desk-scale network: 18 nodes on a fixed random geometric
    /// graph. Gains and local strength are zero; scenarios set the coupling
    /// they want.
    static Topology desk18();

    int n() const { return n_; }
    bool edge(int i, int j) const { return adjacency_[static_cast<std::size_t>(i) * n_ + j] != 0; }
    int degree(int i) const { return static_cast<int>(neighbor_index_[i + 1] - neighbor_index_[i]); }
    int max_degree() const;
    int edge_count() const { return static_cast<int>(edges_.size()); }
    /// Undirected edge list, each pair (i, j) with i < j, sorted.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    /// Neighbors of node i (CSR over the sorted edge list).
    const int* neighbors_begin(int i) const { return neighbors_.data() + neighbor_index_[i]; }
    const int* neighbors_end(int i) const { return neighbors_.data() + neighbor_index_[i + 1]; }

    const std::vector<double>& global_gains() const { return global_gains_; }
    double local_strength() const { return local_strength_; }
    double period() const { return period_; }
    const std::vector<double>& natural_freq_offsets() const { return natural_freq_offsets_; }

    double max_gain() const;
    double min_gain() const;

    /// Copies with modified coupling; used by parameter sweeps.
    Topology with_gains(std::vector<double> gains) const;
    Topology with_uniform_gain(double g) const;
    Topology with_local_strength(double l) const;

    /// Non-fatal advisories, e.g. when couplings are too large for the
    /// weak-coupling assumption behind the averaged model (g, l < 0.1).
    std::vector<std::string> advisories() const;

private:
    int n_ = 0;
    std::vector<std::uint8_t> adjacency_;  // n*n row-major 0/1, zero diagonal
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> neighbors_;
    std::vector<std::size_t> neighbor_index_;
    std::vector<double> global_gains_;
    double local_strength_ = 0.0;
    double period_ = 1.0;
    std::vector<double> natural_freq_offsets_;
};

/// Signed node-edge incidence matrix: one column per undirected edge (i, j),
/// i < j, carrying +1 at row i and -1 at row j. The orientation convention is
/// fixed (smaller index positive) so outputs are reproducible; B*B^T does not
/// depend on it.
Matrix incidence_matrix(const Topology& topo);

/// Graph Laplacian: L_ij = -a_ij off the diagonal, L_ii = degree(i).
/// Equal to B*B^T for the incidence matrix above.
Matrix laplacian(const Topology& topo);

/// Breadth-first reachability: true iff the local coupling graph has a
/// single component spanning all nodes.
bool is_connected(const Topology& topo);

}  // namespace pcosync

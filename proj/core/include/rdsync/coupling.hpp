// Network connectivity matrices: zero row/column sums, nonnegative
// off-diagonal weights, topology builders and the symmetric/antisymmetric
// decomposition the synchronization analysis works with.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdsync {

/// n x n connectivity matrix.  Construction checks nonnegative off-diagonal
/// entries and vanishing row and column sums (relative tolerance 1e-12).
/// Connectivity of the symmetric support is checked by validate_connected()
/// and enforced where the theory needs it; an all-zero matrix is a legal
/// uncoupled baseline for simulations.
class CouplingMatrix {
public:
    CouplingMatrix(int n, std::vector<double> entries);

    /// Uncoupled network (all entries zero).  Unlike the checked
    /// constructor this accepts n = 1 for single-node baselines.
    static CouplingMatrix none(int n);

    int n() const { return n_; }
    double at(int i, int k) const { return entries_[static_cast<std::size_t>(i) * n_ + k]; }
    const std::vector<double>& entries() const { return entries_; }

    double max_abs_entry() const;
    double max_abs_diagonal() const;

    /// Scales every entry; preserves all structural invariants.
    CouplingMatrix scaled(double factor) const;

    bool operator==(const CouplingMatrix&) const = default;

private:
    struct Unchecked {};
    CouplingMatrix(int n, std::vector<double> entries, Unchecked);

    int n_ = 0;
    std::vector<double> entries_;
};

/// G = E + L with E symmetric and L antisymmetric, both with zero row sums.
struct SymmetricSplit {
    int n = 0;
    std::vector<double> sym;      // eps_ik = (c_ik + c_ki)/2
    std::vector<double> antisym;  // del_ik = (c_ik - c_ki)/2

    double eps(int i, int k) const { return sym[static_cast<std::size_t>(i) * n + k]; }
    double del(int i, int k) const { return antisym[static_cast<std::size_t>(i) * n + k]; }
};

/// All-to-all coupling of strength g: c_ik = g off-diagonal, c_ii = -(n-1)g.
CouplingMatrix complete_network(int n, double g);

/// Directed cycle: c_ii = -c, c_{i,i+1 mod n} = c, zeros elsewhere.
CouplingMatrix ring_unidirectional(int n, double c);

SymmetricSplit split_symmetric(const CouplingMatrix& G);

/// True iff the undirected graph induced by eps_ik > 0 is connected.
bool is_connected(const CouplingMatrix& G);

/// Throws if the symmetric support is disconnected.
void validate_connected(const CouplingMatrix& G);

/// Parses n lines of n whitespace/comma-separated decimals ('#' comments
/// ignored) and returns a fully validated, connected matrix.
CouplingMatrix load_matrix(const std::string& text);

void write_matrix(const CouplingMatrix& G, std::ostream& os);

/// Undirected edges (k < l) of the symmetric support.
std::vector<std::pair<int, int>> symmetric_edges(const CouplingMatrix& G);

} // namespace rdsync

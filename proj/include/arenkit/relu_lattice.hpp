#pragma once

#include "arenkit/bigint.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arenkit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class LayerRole { Linear, Selector, MinStage, MaxStage, Output };

std::string_view role_name(LayerRole role);
LayerRole parse_role(std::string_view name);

// ---------------------------------------------------------------------------
// Architectures
// ---------------------------------------------------------------------------

struct ArchLayer {
  BigInt in;
  BigInt out;
  LayerRole role = LayerRole::Linear;
  bool activation = false;

  friend bool operator==(const ArchLayer&, const ArchLayer&) = default;
};

/// Layer-size list of a ReLU network. Sizes are arbitrary precision because
/// the unique-order bound grows combinatorially.
struct ArchDescriptor {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<ArchLayer> layers;
  BigInt n_local = 1;    // N: local linear functions provisioned
  BigInt n_regions = 1;  // M: unique-order regions provisioned
  bool resource_warning = false;

  /// Weights plus biases of every layer, counted densely.
  BigInt parameter_count() const;
  /// Adjacent layers chain (in_k == out_{k-1}), ends match input/output dims
  /// and the last layer of each min/max block is activation-free.
  bool composable() const;

  /// Structural equality: dimensions and layer list (metadata ignored).
  friend bool operator==(const ArchDescriptor& a, const ArchDescriptor& b) {
    return a.input_dim == b.input_dim && a.output_dim == b.output_dim && a.layers == b.layers;
  }
};

/// Number of parallel two-input blocks in each stage of an N-input max/min
/// network (ceil-halving: 5 -> 3, 2, 1). Empty for N = 1.
std::vector<BigInt> pairwise_stage_units(const BigInt& inputs);

ArchDescriptor maxN_arch(const BigInt& inputs);
ArchDescriptor minN_arch(const BigInt& inputs);

inline const BigInt kDefaultParameterWarning = BigInt(1) << 32;

/// Architecture able to realise any CPWL map R^n -> R^m with at most `n_local`
/// local linear functions and `n_regions` unique-order regions: a linear layer
/// n -> m*N*M (selector folded in), M parallel N-input min networks and one
/// M-input max network, all widths scaled by m.
ArchDescriptor infer_architecture(const BigInt& n_local, const BigInt& n_regions, int n, int m,
                                  const BigInt& warn_parameters = kDefaultParameterWarning);

// ---------------------------------------------------------------------------
// Explicit weights
// ---------------------------------------------------------------------------

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct NetLayer {
  SparseRowMatrix weights;  // out x in
  VectorXd bias;            // out
  bool activation = false;
  LayerRole role = LayerRole::Linear;
};

struct WeightedNet {
  std::vector<NetLayer> layers;

  int input_dim() const;
  int output_dim() const;
  ArchDescriptor architecture() const;
};

/// Layer-by-layer evaluation with element-wise max{., 0} where flagged.
/// Throws Error{ShapeMismatch} on inconsistent shapes.
VectorXd forward(const WeightedNet& net, const VectorXd& x);

/// True when every row of `layer` has a single weight equal to 1 and zero bias.
bool is_one_hot_selector(const NetLayer& layer);

/// ((2,4),(4,1)) networks computing max{a,b} and min{a,b} exactly.
WeightedNet max2_weights();
WeightedNet min2_weights();

/// Explicit N-input max/min network (ceil-halving stages, odd widths
/// replicate their last input).
WeightedNet maxN_weights(int inputs);
WeightedNet minN_weights(int inputs);

// ---------------------------------------------------------------------------
// Lattice descriptions and structured lattice networks
// ---------------------------------------------------------------------------

struct AffineMap {
  Eigen::RowVectorXd gain;
  double offset = 0.0;

  double operator()(const VectorXd& x) const { return gain.dot(x) + offset; }
  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.offset == b.offset && a.gain.size() == b.gain.size() && a.gain == b.gain;
  }
};

/// Scalar two-level lattice form  f(x) = max_i min_{j in subsets[i]} l_j(x).
/// Subset entries are 0-based indices into `local_functions`.
struct CpwlDescription {
  std::vector<AffineMap> local_functions;
  std::vector<std::vector<int>> subsets;

  /// Throws Error{EmptySubset | InvalidArgument} if malformed.
  void validate() const;
  double evaluate(const VectorXd& x) const;
};

/// The parameter list of an (N, M) lattice network. Only the first (linear)
/// layer carries free weights; the min and max stages are fixed. Each min
/// block routes N ports to local functions; block and port sequences are
/// run-length encoded so that duplication-padded embeddings stay compact.
class LatticeNet {
 public:
  struct PortRun {
    int function = 0;  // index into functions[channel]
    BigInt count = 1;
  };
  struct Block {
    std::vector<std::vector<PortRun>> channels;  // [channel] -> port runs
  };
  struct BlockRun {
    Block block;
    BigInt count = 1;
  };

  LatticeNet() = default;
  LatticeNet(int input_dim, std::vector<std::vector<AffineMap>> functions, std::vector<BlockRun> blocks);

  /// Scalar-output network for one lattice description, ports padded per
  /// the replication rule (extra ports repeat l_{max s_i}).
  static LatticeNet from_cpwl(const CpwlDescription& desc);
  /// Vector output, one description per output channel.
  static LatticeNet from_cpwl(std::span<const CpwlDescription> channels);
  /// Recovers the parameter list from explicit weights with the (N, M) layout
  /// produced by materialize(). Throws Error{ShapeMismatch} otherwise.
  static LatticeNet from_weights(const WeightedNet& net, int n_local, int n_regions, int output_dim);

  int input_dim() const { return n_; }
  int output_dim() const { return static_cast<int>(functions_.size()); }
  const BigInt& n_local() const { return ports_; }
  const BigInt& n_regions() const { return regions_; }
  const std::vector<std::vector<AffineMap>>& functions() const { return functions_; }
  const std::vector<BlockRun>& blocks() const { return blocks_; }

  ArchDescriptor architecture() const;

  /// Evaluates through the ReLU min/max stages; identical blocks and ports are
  /// computed once per run.
  VectorXd forward(const VectorXd& x) const;

  /// Same function on the larger (N', M') architecture: extra ports repeat each
  /// block's last port, extra blocks repeat the last block.
  /// Throws Error{ShapeMismatch} if the target is smaller.
  LatticeNet embed(const BigInt& n_local, const BigInt& n_regions) const;

  /// Explicit sparse weights. With `unfold_selector` the first layer is split
  /// into local functions (n -> m*N) and a one-hot selector (m*N -> m*N*M).
  /// Throws Error{ResourceLimit} above `max_units` total units.
  WeightedNet materialize(bool unfold_selector = false, long max_units = 20'000'000) const;

 private:
  int n_ = 0;
  std::vector<std::vector<AffineMap>> functions_;
  std::vector<BlockRun> blocks_;
  BigInt ports_ = 0;
  BigInt regions_ = 0;
};

/// Explicit network computing the lattice form of `desc` exactly.
WeightedNet assemble_lattice_net(const CpwlDescription& desc);
WeightedNet assemble_lattice_net(std::span<const CpwlDescription> channels);

/// Lifts an (N, M) network into the (N', M') architecture by duplication.
WeightedNet embed(const WeightedNet& smaller, int n_local, int n_regions, int output_dim,
                  int target_local, int target_regions);

}  // namespace arenkit

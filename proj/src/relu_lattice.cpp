#include "arenkit/relu_lattice.hpp"

#include "arenkit/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <functional>
#include <optional>

namespace arenkit {

namespace {

using Triplet = Eigen::Triplet<double>;

BigInt ceil_half(const BigInt& w) { return (w + 1) / 2; }

int to_int(const BigInt& value, const char* what) {
  if (value < 0 || value > BigInt(std::numeric_limits<int>::max())) {
    throw Error(Errc::ResourceLimit, std::string(what) + " does not fit in memory-addressable size");
  }
  return value.convert_to<int>();
}

void append_stage_arch(std::vector<ArchLayer>& layers, const BigInt& inputs, const BigInt& copies,
                       LayerRole role) {
  BigInt width = inputs;
  for (const BigInt& units : pairwise_stage_units(inputs)) {
    layers.push_back({copies * width, copies * 4 * units, role, true});
    layers.push_back({copies * 4 * units, copies * units, role, false});
    width = units;
  }
}

// Hidden-unit pattern of a two-input block: relu of (a+b, -a-b, -a+b, a-b).
constexpr double kHidden[4][2] = {{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};
// (a+b)/2 +- |a-b|/2 from the hidden units.
constexpr double kMaxOut[4] = {0.5, -0.5, 0.5, 0.5};
constexpr double kMinOut[4] = {0.5, -0.5, -0.5, -0.5};

double pair_block(double a, double b, bool is_max) {
  const double* out = is_max ? kMaxOut : kMinOut;
  double acc = 0.0;
  for (int r = 0; r < 4; ++r) {
    acc += out[r] * std::max(kHidden[r][0] * a + kHidden[r][1] * b, 0.0);
  }
  return acc;
}

// Appends the two layers of every pairwise stage reducing `width` elements in
// each of `groups` groups. `source(g, e)` is the input column of element e of
// group g for the first stage; later stages use the contiguous layout g*w + e.
void append_stage_weights(std::vector<NetLayer>& layers, int in_dim, int groups, int width,
                          const std::function<int(int, int)>& first_source, bool is_max,
                          LayerRole role) {
  std::function<int(int, int)> source = first_source;
  int w = width;
  while (w > 1) {
    const int half = (w + 1) / 2;
    NetLayer hidden;
    hidden.weights.resize(groups * 4 * half, in_dim);
    hidden.bias = VectorXd::Zero(groups * 4 * half);
    hidden.activation = true;
    hidden.role = role;
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(groups) * 8 * half);
    for (int g = 0; g < groups; ++g) {
      for (int k = 0; k < half; ++k) {
        const int a = source(g, 2 * k);
        const int b = source(g, std::min(2 * k + 1, w - 1));
        for (int r = 0; r < 4; ++r) {
          const int row = g * 4 * half + 4 * k + r;
          trip.emplace_back(row, a, kHidden[r][0]);
          trip.emplace_back(row, b, kHidden[r][1]);
        }
      }
    }
    hidden.weights.setFromTriplets(trip.begin(), trip.end());

    NetLayer combine;
    combine.weights.resize(groups * half, groups * 4 * half);
    combine.bias = VectorXd::Zero(groups * half);
    combine.activation = false;
    combine.role = role;
    trip.clear();
    const double* out = is_max ? kMaxOut : kMinOut;
    for (int g = 0; g < groups; ++g) {
      for (int k = 0; k < half; ++k) {
        for (int r = 0; r < 4; ++r) trip.emplace_back(g * half + k, g * 4 * half + 4 * k + r, out[r]);
      }
    }
    combine.weights.setFromTriplets(trip.begin(), trip.end());

    layers.push_back(std::move(hidden));
    layers.push_back(std::move(combine));
    in_dim = groups * half;
    source = [half](int g, int e) { return g * half + e; };
    w = half;
  }
}

WeightedNet pairwise_network(int inputs, bool is_max) {
  if (inputs < 1) throw Error(Errc::InvalidArgument, "network needs at least one input");
  WeightedNet net;
  if (inputs == 1) {
    NetLayer identity;
    identity.weights.resize(1, 1);
    identity.weights.insert(0, 0) = 1.0;
    identity.bias = VectorXd::Zero(1);
    identity.role = is_max ? LayerRole::MaxStage : LayerRole::MinStage;
    net.layers.push_back(std::move(identity));
    return net;
  }
  append_stage_weights(net.layers, inputs, 1, inputs, [](int, int e) { return e; }, is_max,
                       is_max ? LayerRole::MaxStage : LayerRole::MinStage);
  return net;
}

struct Run {
  double value;
  BigInt count;
};

void push_run(std::vector<Run>& runs, double value, const BigInt& count) {
  if (count == 0) return;
  if (!runs.empty() && runs.back().value == value) {
    runs.back().count += count;
  } else {
    runs.push_back({value, count});
  }
}

// One pairwise stage over a run-length encoded signal.
std::vector<Run> reduce_stage(const std::vector<Run>& runs, bool is_max) {
  std::vector<Run> out;
  std::optional<double> pending;
  for (const Run& run : runs) {
    BigInt left = run.count;
    if (pending) {
      push_run(out, pair_block(*pending, run.value, is_max), 1);
      left -= 1;
      pending.reset();
    }
    if (left >= 2) push_run(out, pair_block(run.value, run.value, is_max), left / 2);
    if (left % 2 == 1) pending = run.value;
  }
  // Odd width: the last element is fed to both inputs of the final block.
  if (pending) push_run(out, pair_block(*pending, *pending, is_max), 1);
  return out;
}

double reduce_all(std::vector<Run> runs, bool is_max) {
  auto total = [&] {
    BigInt t = 0;
    for (const Run& r : runs) t += r.count;
    return t;
  };
  while (total() > 1) runs = reduce_stage(runs, is_max);
  return runs.front().value;
}

BigInt port_total(const std::vector<LatticeNet::PortRun>& ports) {
  BigInt total = 0;
  for (const auto& p : ports) total += p.count;
  return total;
}

}  // namespace

std::string_view role_name(LayerRole role) {
  switch (role) {
    case LayerRole::Linear: return "linear";
    case LayerRole::Selector: return "selector";
    case LayerRole::MinStage: return "min-stage";
    case LayerRole::MaxStage: return "max-stage";
    case LayerRole::Output: return "output";
  }
  return "linear";
}

LayerRole parse_role(std::string_view name) {
  for (LayerRole role : {LayerRole::Linear, LayerRole::Selector, LayerRole::MinStage,
                         LayerRole::MaxStage, LayerRole::Output}) {
    if (role_name(role) == name) return role;
  }
  throw Error(Errc::Parse, "unknown layer role '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

BigInt ArchDescriptor::parameter_count() const {
  BigInt total = 0;
  for (const auto& layer : layers) total += layer.in * layer.out + layer.out;
  return total;
}

bool ArchDescriptor::composable() const {
  if (layers.empty()) return input_dim == output_dim;
  if (layers.front().in != input_dim || layers.back().out != output_dim) return false;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& layer = layers[k];
    if (layer.in < 1 || layer.out < 1) return false;
    if (k > 0 && layer.in != layers[k - 1].out) return false;
    const bool block_end = k + 1 == layers.size() || layers[k + 1].role != layer.role;
    const bool staged = layer.role == LayerRole::MinStage || layer.role == LayerRole::MaxStage;
    if (staged && block_end && layer.activation) return false;
  }
  return true;
}

std::vector<BigInt> pairwise_stage_units(const BigInt& inputs) {
  if (inputs < 1) throw Error(Errc::InvalidArgument, "max/min network needs at least one input");
  std::vector<BigInt> units;
  BigInt width = inputs;
  while (width > 1) {
    width = ceil_half(width);
    units.push_back(width);
  }
  return units;
}

ArchDescriptor maxN_arch(const BigInt& inputs) {
  ArchDescriptor arch;
  arch.input_dim = to_int(inputs, "max network input count");
  arch.output_dim = 1;
  arch.n_regions = inputs;
  append_stage_arch(arch.layers, inputs, 1, LayerRole::MaxStage);
  if (arch.layers.empty()) arch.layers.push_back({1, 1, LayerRole::MaxStage, false});  // identity
  return arch;
}

ArchDescriptor minN_arch(const BigInt& inputs) {
  ArchDescriptor arch;
  arch.input_dim = to_int(inputs, "min network input count");
  arch.output_dim = 1;
  arch.n_local = inputs;
  append_stage_arch(arch.layers, inputs, 1, LayerRole::MinStage);
  if (arch.layers.empty()) arch.layers.push_back({1, 1, LayerRole::MinStage, false});  // identity
  return arch;
}

ArchDescriptor infer_architecture(const BigInt& n_local, const BigInt& n_regions, int n, int m,
                                  const BigInt& warn_parameters) {
  if (n_local < 1 || n_regions < 1) {
    throw Error(Errc::InvalidArgument, "N and M estimates must be at least 1");
  }
  if (n < 1 || m < 1) throw Error(Errc::InvalidArgument, "input and output dimensions must be >= 1");
  ArchDescriptor arch;
  arch.input_dim = n;
  arch.output_dim = m;
  arch.n_local = n_local;
  arch.n_regions = n_regions;
  if (n_local == 1 && n_regions == 1) {
    arch.layers.push_back({n, m, LayerRole::Output, false});
  } else {
    arch.layers.push_back({n, BigInt(m) * n_local * n_regions, LayerRole::Linear, false});
    append_stage_arch(arch.layers, n_local, BigInt(m) * n_regions, LayerRole::MinStage);
    append_stage_arch(arch.layers, n_regions, BigInt(m), LayerRole::MaxStage);
  }
  const BigInt params = arch.parameter_count();
  if (params > warn_parameters) {
    arch.resource_warning = true;
    spdlog::warn("architecture has {} parameters (warning threshold {})", params.str(),
                 warn_parameters.str());
  }
  return arch;
}

// ---------------------------------------------------------------------------

int WeightedNet::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weights.cols());
}

int WeightedNet::output_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.back().weights.rows());
}

ArchDescriptor WeightedNet::architecture() const {
  ArchDescriptor arch;
  arch.input_dim = input_dim();
  arch.output_dim = output_dim();
  for (const auto& layer : layers) {
    arch.layers.push_back({BigInt(layer.weights.cols()), BigInt(layer.weights.rows()), layer.role,
                           layer.activation});
  }
  return arch;
}

VectorXd forward(const WeightedNet& net, const VectorXd& x) {
  VectorXd signal = x;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    const auto& layer = net.layers[k];
    if (layer.weights.cols() != signal.size() || layer.bias.size() != layer.weights.rows()) {
      throw Error(Errc::ShapeMismatch, "layer " + std::to_string(k) + " expects input of size " +
                                           std::to_string(layer.weights.cols()) + ", got " +
                                           std::to_string(signal.size()));
    }
    VectorXd next = layer.weights * signal + layer.bias;
    if (layer.activation) next = next.cwiseMax(0.0);
    signal = std::move(next);
  }
  return signal;
}

bool is_one_hot_selector(const NetLayer& layer) {
  if (layer.bias.size() != layer.weights.rows() || !layer.bias.isZero(0.0)) return false;
  for (Eigen::Index r = 0; r < layer.weights.outerSize(); ++r) {
    int ones = 0;
    for (SparseRowMatrix::InnerIterator it(layer.weights, r); it; ++it) {
      if (it.value() == 1.0) {
        ++ones;
      } else if (it.value() != 0.0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

WeightedNet max2_weights() { return pairwise_network(2, true); }
WeightedNet min2_weights() { return pairwise_network(2, false); }
WeightedNet maxN_weights(int inputs) { return pairwise_network(inputs, true); }
WeightedNet minN_weights(int inputs) { return pairwise_network(inputs, false); }

// ---------------------------------------------------------------------------

void CpwlDescription::validate() const {
  if (local_functions.empty()) throw Error(Errc::InvalidArgument, "no local functions");
  if (subsets.empty()) throw Error(Errc::InvalidArgument, "no subsets");
  const auto dim = local_functions.front().gain.size();
  for (const auto& f : local_functions) {
    if (f.gain.size() != dim) throw Error(Errc::DimensionMismatch, "local function gains differ in size");
  }
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i].empty()) throw Error(Errc::EmptySubset, "subset " + std::to_string(i) + " is empty");
    for (int j : subsets[i]) {
      if (j < 0 || static_cast<std::size_t>(j) >= local_functions.size()) {
        throw Error(Errc::InvalidArgument, "subset index " + std::to_string(j) + " out of range");
      }
    }
  }
}

double CpwlDescription::evaluate(const VectorXd& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& subset : subsets) {
    double low = std::numeric_limits<double>::infinity();
    for (int j : subset) low = std::min(low, local_functions[static_cast<std::size_t>(j)](x));
    best = std::max(best, low);
  }
  return best;
}

LatticeNet::LatticeNet(int input_dim, std::vector<std::vector<AffineMap>> functions,
                       std::vector<BlockRun> blocks)
    : n_(input_dim), functions_(std::move(functions)), blocks_(std::move(blocks)) {
  if (n_ < 1) throw Error(Errc::InvalidArgument, "input dimension must be >= 1");
  if (functions_.empty()) throw Error(Errc::InvalidArgument, "lattice network needs an output channel");
  for (const auto& pool : functions_) {
    if (pool.empty()) throw Error(Errc::InvalidArgument, "channel without local functions");
    for (const auto& f : pool) {
      if (f.gain.size() != n_) throw Error(Errc::ShapeMismatch, "local function gain has wrong size");
    }
  }
  if (blocks_.empty()) throw Error(Errc::InvalidArgument, "lattice network needs at least one block");
  regions_ = 0;
  ports_ = -1;
  for (const auto& run : blocks_) {
    if (run.count < 1) throw Error(Errc::InvalidArgument, "block run count must be >= 1");
    regions_ += run.count;
    if (run.block.channels.size() != functions_.size()) {
      throw Error(Errc::ShapeMismatch, "block routes a different number of channels");
    }
    for (std::size_t c = 0; c < functions_.size(); ++c) {
      const auto& ports = run.block.channels[c];
      for (const auto& port : ports) {
        if (port.count < 1 || port.function < 0 ||
            static_cast<std::size_t>(port.function) >= functions_[c].size()) {
          throw Error(Errc::InvalidArgument, "invalid port run");
        }
      }
      const BigInt total = port_total(ports);
      if (total < 1) throw Error(Errc::EmptySubset, "block without ports");
      if (ports_ < 0) ports_ = total;
      if (total != ports_) throw Error(Errc::ShapeMismatch, "blocks have different port counts");
    }
  }
}

LatticeNet LatticeNet::from_cpwl(const CpwlDescription& desc) {
  return from_cpwl(std::span<const CpwlDescription>(&desc, 1));
}

LatticeNet LatticeNet::from_cpwl(std::span<const CpwlDescription> channels) {
  if (channels.empty()) throw Error(Errc::InvalidArgument, "no output channels");
  std::size_t ports = 0;
  std::size_t regions = 0;
  for (const auto& desc : channels) {
    desc.validate();
    ports = std::max(ports, desc.local_functions.size());
    regions = std::max(regions, desc.subsets.size());
  }
  const int n = static_cast<int>(channels.front().local_functions.front().gain.size());
  std::vector<std::vector<AffineMap>> functions;
  for (const auto& desc : channels) functions.push_back(desc.local_functions);

  std::vector<BlockRun> blocks;
  for (std::size_t i = 0; i < regions; ++i) {
    BlockRun run;
    for (const auto& desc : channels) {
      // Channels with fewer subsets repeat their last one.
      std::vector<int> subset = desc.subsets[std::min(i, desc.subsets.size() - 1)];
      std::sort(subset.begin(), subset.end());
      subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
      std::vector<PortRun> port_runs;
      for (int j : subset) port_runs.push_back({j, 1});
      // Pad to N ports with copies of l_{max s_i}.
      port_runs.back().count += static_cast<long>(ports - subset.size());
      run.block.channels.push_back(std::move(port_runs));
    }
    blocks.push_back(std::move(run));
  }
  return LatticeNet(n, std::move(functions), std::move(blocks));
}

ArchDescriptor LatticeNet::architecture() const {
  return infer_architecture(ports_, regions_, n_, output_dim(), BigInt(-1) + (BigInt(1) << 4096));
}

VectorXd LatticeNet::forward(const VectorXd& x) const {
  if (x.size() != n_) throw Error(Errc::ShapeMismatch, "input has wrong dimension");
  const auto m = functions_.size();
  VectorXd out(static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<double> values;
    values.reserve(functions_[c].size());
    for (const auto& f : functions_[c]) values.push_back(f(x));
    std::vector<Run> block_values;
    for (const auto& run : blocks_) {
      std::vector<Run> ports;
      for (const auto& port : run.block.channels[c]) {
        push_run(ports, values[static_cast<std::size_t>(port.function)], port.count);
      }
      push_run(block_values, reduce_all(std::move(ports), false), run.count);
    }
    out(static_cast<Eigen::Index>(c)) = reduce_all(std::move(block_values), true);
  }
  return out;
}

LatticeNet LatticeNet::embed(const BigInt& n_local, const BigInt& n_regions) const {
  if (n_local < ports_ || n_regions < regions_) {
    throw Error(Errc::ShapeMismatch, "embedding target (" + n_local.str() + ", " + n_regions.str() +
                                         ") is smaller than (" + ports_.str() + ", " + regions_.str() + ")");
  }
  std::vector<BlockRun> blocks = blocks_;
  const BigInt extra_ports = n_local - ports_;
  for (auto& run : blocks) {
    for (auto& ports : run.block.channels) ports.back().count += extra_ports;
  }
  blocks.back().count += n_regions - regions_;
  return LatticeNet(n_, functions_, std::move(blocks));
}

WeightedNet LatticeNet::materialize(bool unfold_selector, long max_units) const {
  const int m = output_dim();
  const int ports = to_int(ports_, "port count");
  const int regions = to_int(regions_, "region count");
  const BigInt first_width = BigInt(m) * ports_ * regions_;
  if (first_width * 6 > max_units) {
    throw Error(Errc::ResourceLimit, "network with " + first_width.str() +
                                         " first-layer units is too large to materialize");
  }
  const int width = first_width.convert_to<int>();

  // Flattened (block, channel, port) -> function index.
  std::vector<int> routing;
  routing.reserve(static_cast<std::size_t>(width));
  for (const auto& run : blocks_) {
    const int copies = run.count.convert_to<int>();
    for (int copy = 0; copy < copies; ++copy) {
      for (int c = 0; c < m; ++c) {
        for (const auto& port : run.block.channels[static_cast<std::size_t>(c)]) {
          routing.insert(routing.end(), port.count.convert_to<std::size_t>(), port.function);
        }
      }
    }
  }
  auto channel_of = [&](int row) { return (row / ports) % m; };

  WeightedNet net;
  const bool single_affine = ports == 1 && regions == 1;
  if (unfold_selector) {
    NetLayer locals;
    locals.weights.resize(m * ports, n_);
    locals.bias = VectorXd::Zero(m * ports);
    locals.role = LayerRole::Linear;
    std::vector<Triplet> trip;
    for (int c = 0; c < m; ++c) {
      const auto& pool = functions_[static_cast<std::size_t>(c)];
      if (static_cast<int>(pool.size()) > ports) {
        throw Error(Errc::InvalidArgument, "selector form needs at most N functions per channel");
      }
      for (int j = 0; j < ports; ++j) {
        // Unused local-function neurons repeat the last function.
        const auto& f = pool[static_cast<std::size_t>(std::min<int>(j, static_cast<int>(pool.size()) - 1))];
        for (int k = 0; k < n_; ++k) trip.emplace_back(c * ports + j, k, f.gain(k));
        locals.bias(c * ports + j) = f.offset;
      }
    }
    locals.weights.setFromTriplets(trip.begin(), trip.end());
    net.layers.push_back(std::move(locals));

    NetLayer selector;
    selector.weights.resize(width, m * ports);
    selector.bias = VectorXd::Zero(width);
    selector.role = single_affine ? LayerRole::Output : LayerRole::Selector;
    trip.clear();
    for (int row = 0; row < width; ++row) {
      trip.emplace_back(row, channel_of(row) * ports + routing[static_cast<std::size_t>(row)], 1.0);
    }
    selector.weights.setFromTriplets(trip.begin(), trip.end());
    net.layers.push_back(std::move(selector));
  } else {
    NetLayer linear;
    linear.weights.resize(width, n_);
    linear.bias = VectorXd::Zero(width);
    linear.role = single_affine ? LayerRole::Output : LayerRole::Linear;
    std::vector<Triplet> trip;
    for (int row = 0; row < width; ++row) {
      const auto& f = functions_[static_cast<std::size_t>(channel_of(row))]
                                [static_cast<std::size_t>(routing[static_cast<std::size_t>(row)])];
      for (int k = 0; k < n_; ++k) {
        if (f.gain(k) != 0.0) trip.emplace_back(row, k, f.gain(k));
      }
      linear.bias(row) = f.offset;
    }
    linear.weights.setFromTriplets(trip.begin(), trip.end());
    net.layers.push_back(std::move(linear));
  }

  // Min blocks: group g = block * m + channel, element p at g * N + p.
  append_stage_weights(net.layers, width, m * regions, ports,
                       [ports](int g, int e) { return g * ports + e; }, false, LayerRole::MinStage);
  // Max over blocks per channel; min outputs sit at block * m + channel.
  append_stage_weights(net.layers, m * regions, m, regions,
                       [m](int c, int i) { return i * m + c; }, true, LayerRole::MaxStage);
  return net;
}

LatticeNet LatticeNet::from_weights(const WeightedNet& net, int n_local, int n_regions, int output_dim) {
  if (net.layers.empty()) throw Error(Errc::ShapeMismatch, "empty network");
  const int n = net.input_dim();
  const ArchDescriptor expected = infer_architecture(n_local, n_regions, n, output_dim);
  if (net.architecture() != expected) {
    throw Error(Errc::ShapeMismatch, "network does not have the (N, M) lattice architecture");
  }
  const auto& first = net.layers.front();
  if (first.activation) throw Error(Errc::ShapeMismatch, "first layer must be linear");

  std::vector<std::vector<AffineMap>> pools(static_cast<std::size_t>(output_dim));
  std::vector<BlockRun> blocks(static_cast<std::size_t>(n_regions));
  const MatrixXd dense = MatrixXd(first.weights);
  for (int i = 0; i < n_regions; ++i) {
    auto& block = blocks[static_cast<std::size_t>(i)].block;
    block.channels.resize(static_cast<std::size_t>(output_dim));
    for (int c = 0; c < output_dim; ++c) {
      auto& pool = pools[static_cast<std::size_t>(c)];
      for (int p = 0; p < n_local; ++p) {
        const int row = (i * output_dim + c) * n_local + p;
        AffineMap f{dense.row(row), first.bias(row)};
        auto found = std::find(pool.begin(), pool.end(), f);
        const int index = static_cast<int>(found - pool.begin());
        if (found == pool.end()) pool.push_back(std::move(f));
        auto& ports = block.channels[static_cast<std::size_t>(c)];
        if (!ports.empty() && ports.back().function == index) {
          ports.back().count += 1;
        } else {
          ports.push_back({index, 1});
        }
      }
    }
  }
  LatticeNet lattice(n, std::move(pools), std::move(blocks));

  // Everything after the first layer is fixed by (N, M, m); require an exact match.
  const WeightedNet canonical = lattice.materialize();
  for (std::size_t k = 1; k < net.layers.size(); ++k) {
    const auto& got = net.layers[k];
    const auto& want = canonical.layers[k];
    if (got.activation != want.activation || got.bias != want.bias ||
        (SparseRowMatrix(got.weights - want.weights)).norm() != 0.0) {
      throw Error(Errc::ShapeMismatch, "layer " + std::to_string(k) + " is not a lattice min/max stage");
    }
  }
  return lattice;
}

WeightedNet assemble_lattice_net(const CpwlDescription& desc) {
  return LatticeNet::from_cpwl(desc).materialize();
}

WeightedNet assemble_lattice_net(std::span<const CpwlDescription> channels) {
  return LatticeNet::from_cpwl(channels).materialize();
}

WeightedNet embed(const WeightedNet& smaller, int n_local, int n_regions, int output_dim,
                  int target_local, int target_regions) {
  return LatticeNet::from_weights(smaller, n_local, n_regions, output_dim)
      .embed(target_local, target_regions)
      .materialize();
}

}  // namespace arenkit

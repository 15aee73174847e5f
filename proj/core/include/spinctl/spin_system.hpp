#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinctl {

// Practical cap on register size: everything downstream is dense.
inline constexpr std::size_t kMaxSpins = 10;

enum class CouplingModel { weak_ising, full_exchange };

struct Spin {
  std::string name;
  std::string species;  // e.g. "1H", "13C"
  double shift_hz = 0.0;
};

// Unordered spin-name pair with a canonical (sorted) representation so it
// can key a symmetric coupling map.
struct SpinPair {
  std::string a, b;
  SpinPair() = default;
  SpinPair(std::string x, std::string y) {
    if (x == y) throw std::invalid_argument("self-coupling pair: " + x);
    if (x < y) { a = std::move(x); b = std::move(y); }
    else       { a = std::move(y); b = std::move(x); }
  }
  bool operator<(const SpinPair& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
  bool operator==(const SpinPair& o) const { return a == o.a && b == o.b; }
  bool contains(const std::string& s) const { return a == s || b == s; }
  std::string str() const { return a + "," + b; }
};

struct ControlChannel {
  std::string species;
  double transmitter_freq_hz = 0.0;  // frame offset the shifts are relative to
  double max_amplitude_hz = 30000.0; // nutation-frequency cap
};

class SpinSystem {
 public:
  SpinSystem() = default;
  SpinSystem(std::vector<Spin> spins, std::map<SpinPair, double> couplings,
             CouplingModel model = CouplingModel::weak_ising,
             std::vector<ControlChannel> channels = {});

  std::size_t n_spins() const { return spins_.size(); }
  std::size_t dim() const { return std::size_t{1} << spins_.size(); }

  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(std::size_t i) const { return spins_.at(i); }
  std::size_t index_of(const std::string& name) const;
  bool has_spin(const std::string& name) const;

  const std::map<SpinPair, double>& couplings() const { return couplings_; }
  double j_hz(const std::string& a, const std::string& b) const;
  CouplingModel coupling_model() const { return model_; }

  const std::vector<ControlChannel>& channels() const { return channels_; }
  const ControlChannel& channel_for(const std::string& species) const;
  // Spin indices driven by a channel (same species).
  std::vector<std::size_t> spins_of_species(const std::string& species) const;

  // New system containing only the named spins and their internal couplings.
  SpinSystem restrict_to_subsystem(const std::vector<std::string>& subset) const;

 private:
  std::vector<Spin> spins_;
  std::map<SpinPair, double> couplings_;
  CouplingModel model_ = CouplingModel::weak_ising;
  std::vector<ControlChannel> channels_;
};

// One piecewise-constant step: per-channel quadrature amplitudes in Hz,
// keyed by channel species in the order SpinSystem::channels() lists them.
struct PulseStep {
  double duration_s = 0.0;
  std::vector<double> u_x_hz;  // one entry per channel
  std::vector<double> u_y_hz;
};

struct PulseShape {
  std::vector<std::string> channel_species;
  std::vector<PulseStep> steps;

  std::size_t n_steps() const { return steps.size(); }
  std::size_t n_channels() const { return channel_species.size(); }
  double total_duration() const;
  void validate(const SpinSystem& sys) const;
};

struct SubsystemSpec {
  std::vector<std::vector<std::string>> subsystems;
  std::vector<double> weights;  // nonnegative, one per subset

  // Every coupling at least threshold_hz strong must be internal to some subset.
  void validate(const SpinSystem& sys, double strong_threshold_hz) const;
};

}  // namespace spinctl

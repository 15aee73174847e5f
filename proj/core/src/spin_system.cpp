#include "spinctl/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spinctl {

SpinSystem::SpinSystem(std::vector<Spin> spins, std::map<SpinPair, double> couplings,
                       CouplingModel model, std::vector<ControlChannel> channels)
    : spins_(std::move(spins)), couplings_(std::move(couplings)),
      model_(model), channels_(std::move(channels)) {
  if (spins_.empty()) throw std::invalid_argument("spin system needs at least one spin");
  if (spins_.size() > kMaxSpins)
    throw std::invalid_argument("spin count " + std::to_string(spins_.size()) +
                                " exceeds dense-simulation cap of " + std::to_string(kMaxSpins));
  std::set<std::string> names;
  std::set<std::string> species;
  for (const auto& s : spins_) {
    if (s.name.empty()) throw std::invalid_argument("empty spin name");
    if (!names.insert(s.name).second)
      throw std::invalid_argument("duplicate spin name: " + s.name);
    species.insert(s.species);
    if (!std::isfinite(s.shift_hz))
      throw std::invalid_argument("non-finite shift on " + s.name);
  }
  for (const auto& [pair, j] : couplings_) {
    if (!names.count(pair.a) || !names.count(pair.b))
      throw std::invalid_argument("coupling references unknown spin: " + pair.str());
    if (!std::isfinite(j))
      throw std::invalid_argument("non-finite J on " + pair.str());
  }
  // Default channels: one per species present, 30 kHz cap.
  if (channels_.empty()) {
    for (const auto& sp : species) channels_.push_back({sp, 0.0, 30000.0});
  }
  std::set<std::string> chan_species;
  for (const auto& c : channels_) {
    if (!chan_species.insert(c.species).second)
      throw std::invalid_argument("duplicate channel for species " + c.species);
    if (!(c.max_amplitude_hz > 0.0))
      throw std::invalid_argument("channel max amplitude must be > 0 for " + c.species);
  }
  for (const auto& sp : species)
    if (!chan_species.count(sp))
      throw std::invalid_argument("no control channel for species " + sp);
}

std::size_t SpinSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i].name == name) return i;
  throw std::invalid_argument("unknown spin: " + name);
}

bool SpinSystem::has_spin(const std::string& name) const {
  return std::any_of(spins_.begin(), spins_.end(),
                     [&](const Spin& s) { return s.name == name; });
}

double SpinSystem::j_hz(const std::string& a, const std::string& b) const {
  auto it = couplings_.find(SpinPair(a, b));
  return it == couplings_.end() ? 0.0 : it->second;
}

const ControlChannel& SpinSystem::channel_for(const std::string& species) const {
  for (const auto& c : channels_)
    if (c.species == species) return c;
  throw std::invalid_argument("no channel for species " + species);
}

std::vector<std::size_t> SpinSystem::spins_of_species(const std::string& species) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spins_.size(); ++i)
    if (spins_[i].species == species) out.push_back(i);
  return out;
}

SpinSystem SpinSystem::restrict_to_subsystem(const std::vector<std::string>& subset) const {
  if (subset.empty()) throw std::invalid_argument("empty subsystem");
  std::set<std::string> keep;
  for (const auto& name : subset) {
    index_of(name);  // throws on unknown name
    keep.insert(name);
  }
  std::vector<Spin> sub_spins;
  for (const auto& s : spins_)  // preserve original spin order
    if (keep.count(s.name)) sub_spins.push_back(s);
  std::map<SpinPair, double> sub_couplings;
  for (const auto& [pair, j] : couplings_)
    if (keep.count(pair.a) && keep.count(pair.b)) sub_couplings[pair] = j;
  std::vector<ControlChannel> sub_channels;
  std::set<std::string> sub_species;
  for (const auto& s : sub_spins) sub_species.insert(s.species);
  for (const auto& c : channels_)
    if (sub_species.count(c.species)) sub_channels.push_back(c);
  return SpinSystem(std::move(sub_spins), std::move(sub_couplings), model_,
                    std::move(sub_channels));
}

double PulseShape::total_duration() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.duration_s;
  return t;
}

void PulseShape::validate(const SpinSystem& sys) const {
  for (const auto& name : channel_species) sys.channel_for(name);
  for (const auto& step : steps) {
    if (!(step.duration_s > 0.0) || !std::isfinite(step.duration_s))
      throw std::invalid_argument("pulse step duration must be positive");
    if (step.u_x_hz.size() != channel_species.size() ||
        step.u_y_hz.size() != channel_species.size())
      throw std::invalid_argument("pulse step has wrong channel count");
    for (std::size_t c = 0; c < channel_species.size(); ++c) {
      double ux = step.u_x_hz[c], uy = step.u_y_hz[c];
      if (!std::isfinite(ux) || !std::isfinite(uy))
        throw std::invalid_argument("non-finite pulse amplitude");
      double cap = sys.channel_for(channel_species[c]).max_amplitude_hz;
      if (std::sqrt(ux * ux + uy * uy) > cap * (1.0 + 1e-9))
        throw std::invalid_argument("pulse amplitude exceeds channel cap on " +
                                    channel_species[c]);
    }
  }
}

void SubsystemSpec::validate(const SpinSystem& sys, double strong_threshold_hz) const {
  if (subsystems.size() != weights.size())
    throw std::invalid_argument("subsystem/weight count mismatch");
  for (std::size_t s = 0; s < subsystems.size(); ++s) {
    if (subsystems[s].empty()) throw std::invalid_argument("empty subsystem subset");
    for (const auto& name : subsystems[s]) sys.index_of(name);
    if (weights[s] < 0.0) throw std::invalid_argument("negative subsystem weight");
  }
  for (const auto& [pair, j] : sys.couplings()) {
    if (std::abs(j) < strong_threshold_hz) continue;
    bool internal = false;
    for (const auto& sub : subsystems) {
      bool has_a = std::find(sub.begin(), sub.end(), pair.a) != sub.end();
      bool has_b = std::find(sub.begin(), sub.end(), pair.b) != sub.end();
      if (has_a && has_b) { internal = true; break; }
    }
    if (!internal)
      throw std::invalid_argument("strong coupling " + pair.str() +
                                  " not internal to any subsystem");
  }
}

}  // namespace spinctl

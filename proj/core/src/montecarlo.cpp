#include "rfeh/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "rfeh/error.hpp"

namespace rfeh {
namespace {

constexpr std::uint64_t kChunk = 4096;

struct Moments2 {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

void SimulationPlan::validate() const {
  if (trials < 1) throw ValidationError("simulation needs at least one trial");
  if (blocks_per_trial < 1) throw ValidationError("simulation needs at least one block");
  if (!(packet_duration_s > 0.0)) throw ValidationError("packet duration must be positive");
  link.validate();
  channel.validate();
}

Estimate simulate_energy(const SimulationPlan& plan) {
  plan.validate();
  const auto parts = detail::run_chunks<Moments2>(
      plan.trials, kChunk, plan.threads, [&](std::uint64_t begin, std::uint64_t end) {
        ReceivedPowerSampler draw(plan.link, plan.channel);
        Moments2 m;
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = make_stream(plan.seed, t);
          double u = 0.0;
          for (std::uint64_t b = 0; b < plan.blocks_per_trial; ++b) {
            u += harvested_power(plan.model, draw(rng));
          }
          const double e = u * plan.packet_duration_s;
          m.sum += e;
          m.sum_sq += e * e;
        }
        return m;
      });
  Moments2 total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(plan.trials);
  const double mean = total.sum / n;
  const double var = n > 1 ? std::max(total.sum_sq - n * mean * mean, 0.0) / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

HistogramResult simulate_u_n(const SimulationPlan& plan, std::vector<double> edges) {
  plan.validate();
  if (edges.size() < 2) throw ValidationError("histogram needs at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ValidationError("histogram edges must increase");
  }
  const std::size_t bins = edges.size() - 1;
  struct Part {
    std::vector<std::uint64_t> counts;
    std::uint64_t under = 0;
    std::uint64_t over = 0;
  };
  const auto parts = detail::run_chunks<Part>(
      plan.trials, kChunk, plan.threads, [&](std::uint64_t begin, std::uint64_t end) {
        ReceivedPowerSampler draw(plan.link, plan.channel);
        Part p;
        p.counts.assign(bins, 0);
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = make_stream(plan.seed, t);
          double u = 0.0;
          for (std::uint64_t b = 0; b < plan.blocks_per_trial; ++b) {
            u += harvested_power(plan.model, draw(rng));
          }
          if (u < edges.front()) {
            ++p.under;
          } else if (u >= edges.back()) {
            ++p.over;
          } else {
            const auto it = std::upper_bound(edges.begin(), edges.end(), u);
            ++p.counts[static_cast<std::size_t>(it - edges.begin()) - 1];
          }
        }
        return p;
      });
  HistogramResult h;
  h.counts.assign(bins, 0);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < bins; ++i) h.counts[i] += p.counts[i];
    h.underflow += p.under;
    h.overflow += p.over;
  }
  h.edges = std::move(edges);
  h.total = plan.trials;
  return h;
}

double FirstPassageSamples::mean() const {
  if (blocks.empty()) return 0.0;
  double s = 0.0;
  for (auto b : blocks) s += b;
  return s / static_cast<double>(blocks.size());
}

FirstPassageSamples simulate_first_passage(const SimulationPlan& plan, double theta_mw) {
  plan.validate();
  if (!(theta_mw > 0.0)) throw DomainError("threshold must be positive");
  struct Part {
    std::vector<std::uint32_t> blocks;
    std::uint64_t censored = 0;
  };
  const auto parts = detail::run_chunks<Part>(
      plan.trials, kChunk, plan.threads, [&](std::uint64_t begin, std::uint64_t end) {
        ReceivedPowerSampler draw(plan.link, plan.channel);
        Part p;
        p.blocks.reserve(end - begin);
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = make_stream(plan.seed, t);
          double u = 0.0;
          std::uint64_t n = 0;
          bool crossed = false;
          while (n < plan.blocks_per_trial) {
            ++n;
            u += harvested_power(plan.model, draw(rng));
            if (u > theta_mw) {
              crossed = true;
              break;
            }
          }
          if (!crossed) ++p.censored;
          p.blocks.push_back(static_cast<std::uint32_t>(n));
        }
        return p;
      });
  FirstPassageSamples out;
  out.blocks.reserve(plan.trials);
  for (const auto& p : parts) {
    out.blocks.insert(out.blocks.end(), p.blocks.begin(), p.blocks.end());
    out.censored += p.censored;
  }
  return out;
}

double RfidCounts::frequency() const {
  return trials == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(trials);
}

double RfidCounts::standard_error() const {
  if (trials == 0) return 0.0;
  const double p = frequency();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

RfidCounts simulate_rfid(const SimulationPlan& plan, const RfidScenario& scn) {
  plan.validate();
  scn.validate();
  const double zeta = scn.harvest_share();
  const auto parts = detail::run_chunks<RfidCounts>(
      plan.trials, kChunk, plan.threads, [&](std::uint64_t begin, std::uint64_t end) {
        ReceivedPowerSampler draw(plan.link, plan.channel);
        RfidCounts c;
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = make_stream(plan.seed, t);
          const double p_r = draw(rng);
          const bool a = ber(scn, interrogator_power(scn, plan.link, p_r)) < scn.ber_threshold;
          const bool b = harvested_power(plan.model, zeta * p_r) > scn.tag_consumption_mw;
          ++c.trials;
          c.ber_ok += a;
          c.energy_ok += b;
          c.both += a && b;
        }
        return c;
      });
  RfidCounts total;
  for (const auto& c : parts) {
    total.trials += c.trials;
    total.ber_ok += c.ber_ok;
    total.energy_ok += c.energy_ok;
    total.both += c.both;
  }
  return total;
}

}  // namespace rfeh

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abacus/count.hpp"
#include "abacus/errors.hpp"
#include "abacus/sample.hpp"
#include "abacus/stream.hpp"

namespace abacus {

using int128 = __int128;

/// Sampler state that fixes the discovery probability of an event.
struct DiscoveryInputs {
  std::uint64_t live_edges = 0;
  std::uint64_t c_bad = 0;
  std::uint64_t c_good = 0;
  std::uint64_t budget = 0;

  static DiscoveryInputs from(const PairingState& s) {
    return {s.live_edges, s.c_bad, s.c_good, s.budget};
  }
  /// T = |E| + c_b + c_g
  std::uint64_t total() const noexcept { return live_edges + c_bad + c_good; }
  /// y = min(k, T)
  std::uint64_t sample_bound() const noexcept {
    return budget < total() ? budget : total();
  }

  friend bool operator==(const DiscoveryInputs&, const DiscoveryInputs&) = default;
};

/// Probability that three given live edges are all in the sample:
/// (y/T)((y-1)/(T-1))((y-2)/(T-2)). Throws DegenerateStream for T < 3.
double discovery_probability(const DiscoveryInputs& inputs);

/// sign / discovery_probability. Throws DegenerateStream when undefined.
double increment(Sign sign, const DiscoveryInputs& inputs);

/// Exact rational with the fixed denominator k(k-1)(k-2) (1 when k < 3).
/// Every increment a run can produce is a multiple of 1/k(k-1)(k-2), so
/// sums stay exact in a 128-bit numerator; overflow throws.
class ExactCount {
 public:
  explicit ExactCount(std::uint64_t budget);

  static int128 denominator_for(std::uint64_t budget);

  int128 numerator() const noexcept { return numerator_; }
  int128 denominator() const noexcept { return denominator_; }
  void add_scaled(int128 scaled_numerator);
  double to_double() const;
  /// Reduced "p/q" (or "p" when integral).
  std::string to_string() const;
  bool equals_integer(std::int64_t value) const;

  friend bool operator==(const ExactCount&, const ExactCount&) = default;

 private:
  int128 numerator_ = 0;
  int128 denominator_ = 1;
};

/// increment(sign, inputs) scaled by ExactCount::denominator_for(budget).
int128 scaled_increment(Sign sign, const DiscoveryInputs& inputs);

struct TraceRow {
  std::uint64_t index;
  Sign sign;
  std::uint64_t found;
  double increment;  // 0 when nothing was found
  double estimate;
};

/// Running estimate c. In audit mode an ExactCount mirrors the double.
struct EstimateLedger {
  double estimate = 0.0;
  std::optional<ExactCount> exact;
  std::uint64_t events_processed = 0;
  std::vector<TraceRow> trace;
};

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

struct AbacusOptions {
  bool audit = false;     // keep an ExactCount alongside the double
  bool trace = false;     // record one TraceRow per event
  bool validate = true;   // replay stream validity alongside the run
};

/// Contribution of one event before the sample is touched.
struct EventContribution {
  std::uint64_t found = 0;
  double value = 0.0;      // found * increment
  int128 scaled = 0;       // found * scaled_increment
  double increment = 0.0;
};

/// Counts `event` against `view` using the pre-event sampler inputs.
template <NeighborView View>
EventContribution contribution(const View& view, const EdgeEvent& event,
                               const DiscoveryInputs& inputs, bool audit,
                               CountScratch& scratch,
                               std::uint64_t& comparisons);

/// The sequential estimator: count against S, then update S.
class Abacus {
 public:
  Abacus(std::uint64_t budget, std::uint64_t seed, AbacusOptions options = {});

  /// Counts the event's butterflies against the current sample, folds
  /// them into the ledger, then applies the Random Pairing update.
  void process(const EdgeEvent& event);

  const EstimateLedger& ledger() const noexcept { return ledger_; }
  const PairingState& state() const noexcept { return state_; }
  const SampleGraph& sample() const noexcept { return sample_; }
  double estimate() const noexcept { return ledger_.estimate; }
  std::uint64_t comparisons() const noexcept { return comparisons_; }

  EstimateLedger take_ledger() && { return std::move(ledger_); }
  PairingState take_state() && { return std::move(state_); }
  SampleGraph take_sample() && { return std::move(sample_); }

 private:
  AbacusOptions options_;
  PairingState state_;
  SampleGraph sample_;
  EstimateLedger ledger_;
  std::optional<StreamValidityState> validity_;
  CountScratch scratch_;
  std::uint64_t comparisons_ = 0;
};

/// One event through the ledger and sampler (free-function form of
/// Abacus::process, without validity replay).
void process_event(const EdgeEvent& event, PairingState& state,
                   SampleGraph& graph, EstimateLedger& ledger,
                   CountScratch& scratch);

struct RunResult {
  EstimateLedger ledger;
  PairingState state;
  SampleGraph sample;
};

RunResult run_abacus(std::span<const EdgeEvent> events, std::uint64_t budget,
                     std::uint64_t seed, AbacusOptions options = {});

// ---------------------------------------------------------------------------

template <NeighborView View>
EventContribution contribution(const View& view, const EdgeEvent& event,
                               const DiscoveryInputs& inputs, bool audit,
                               CountScratch& scratch,
                               std::uint64_t& comparisons) {
  EventContribution c;
  c.found = count_butterflies(view, event.edge, scratch, comparisons);
  if (c.found == 0) return c;
  c.increment = increment(event.sign, inputs);
  c.value = static_cast<double>(c.found) * c.increment;
  if (audit) {
    int128 scaled = 0;
    if (__builtin_mul_overflow(scaled_increment(event.sign, inputs),
                               static_cast<int128>(c.found), &scaled))
      throw ArithmeticOverflow("exact contribution overflowed 128 bits");
    c.scaled = scaled;
  }
  return c;
}

}  // namespace abacus

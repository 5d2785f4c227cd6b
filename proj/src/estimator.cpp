#include "abacus/estimator.hpp"

#include <ostream>

#include "abacus/errors.hpp"

namespace abacus {

namespace {

using uint128 = unsigned __int128;

uint128 falling3(std::uint64_t n) {
  return static_cast<uint128>(n) * (n - 1) * (n - 2);
}

std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  uint128 mag = negative ? -static_cast<uint128>(v) : static_cast<uint128>(v);
  std::string digits;
  while (mag > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + mag % 10));
    mag /= 10;
  }
  return negative ? "-" + digits : digits;
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

double discovery_probability(const DiscoveryInputs& inputs) {
  const std::uint64_t t = inputs.total();
  if (t < 3)
    throw DegenerateStream(
        "discovery probability needs at least three prior edges");
  const std::uint64_t y = inputs.sample_bound();
  if (y == t) return 1.0;
  if (y < 3) return 0.0;
  const auto yd = static_cast<double>(y);
  const auto td = static_cast<double>(t);
  return (yd / td) * ((yd - 1) / (td - 1)) * ((yd - 2) / (td - 2));
}

double increment(Sign sign, const DiscoveryInputs& inputs) {
  const std::uint64_t t = inputs.total();
  if (t < 3)
    throw DegenerateStream("increment needs at least three prior edges");
  const std::uint64_t y = inputs.sample_bound();
  if (y == t) return sign_value(sign);
  if (y < 3) throw DegenerateStream("discovery probability is zero (k < 3)");
  // T(T-1)(T-2) / y(y-1)(y-2), the reciprocal of discovery_probability.
  const double magnitude = static_cast<double>(falling3(t)) /
                           static_cast<double>(falling3(y));
  return sign == Sign::Insert ? magnitude : -magnitude;
}

ExactCount::ExactCount(std::uint64_t budget)
    : denominator_(denominator_for(budget)) {}

int128 ExactCount::denominator_for(std::uint64_t budget) {
  return budget < 3 ? 1 : static_cast<int128>(falling3(budget));
}

void ExactCount::add_scaled(int128 scaled_numerator) {
  if (__builtin_add_overflow(numerator_, scaled_numerator, &numerator_))
    throw ArithmeticOverflow("exact estimate overflowed 128 bits");
}

double ExactCount::to_double() const {
  const int128 whole = numerator_ / denominator_;
  const int128 rest = numerator_ % denominator_;
  return static_cast<double>(whole) +
         static_cast<double>(rest) / static_cast<double>(denominator_);
}

std::string ExactCount::to_string() const {
  const int128 g = gcd128(numerator_, denominator_);
  const int128 p = g == 0 ? numerator_ : numerator_ / g;
  const int128 q = g == 0 ? denominator_ : denominator_ / g;
  if (q == 1) return int128_to_string(p);
  return int128_to_string(p) + "/" + int128_to_string(q);
}

bool ExactCount::equals_integer(std::int64_t value) const {
  int128 scaled = 0;
  if (__builtin_mul_overflow(static_cast<int128>(value), denominator_, &scaled))
    return false;
  return scaled == numerator_;
}

int128 scaled_increment(Sign sign, const DiscoveryInputs& inputs) {
  const std::uint64_t t = inputs.total();
  if (t < 3)
    throw DegenerateStream("increment needs at least three prior edges");
  const std::uint64_t y = inputs.sample_bound();
  const int128 denominator = ExactCount::denominator_for(inputs.budget);
  int128 magnitude = 0;
  if (y == t) {
    magnitude = denominator;
  } else {
    if (y < 3) throw DegenerateStream("discovery probability is zero (k < 3)");
    // y == k here, so T(T-1)(T-2)/k(k-1)(k-2) has the fixed denominator.
    magnitude = static_cast<int128>(falling3(t));
  }
  return sign == Sign::Insert ? magnitude : -magnitude;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << "index,sign,found,increment,estimate\n";
  const auto old_precision = out.precision(17);
  for (const auto& r : rows)
    out << r.index << ',' << sign_value(r.sign) << ',' << r.found << ','
        << r.increment << ',' << r.estimate << '\n';
  out.precision(old_precision);
}

Abacus::Abacus(std::uint64_t budget, std::uint64_t seed, AbacusOptions options)
    : options_(options), state_(budget, seed) {
  if (options_.audit) ledger_.exact.emplace(budget);
  if (options_.validate) validity_.emplace();
}

void Abacus::process(const EdgeEvent& event) {
  if (validity_) validity_->apply(event);

  const auto inputs = DiscoveryInputs::from(state_);
  const auto c = contribution(SampleView(sample_), event, inputs,
                              ledger_.exact.has_value(), scratch_,
                              comparisons_);
  ledger_.estimate += c.value;
  if (ledger_.exact) ledger_.exact->add_scaled(c.scaled);
  ++ledger_.events_processed;
  if (options_.trace)
    ledger_.trace.push_back(
        {event.index, event.sign, c.found, c.increment, ledger_.estimate});

  if (event.sign == Sign::Insert)
    insert_to_sample(state_, sample_, event.edge);
  else
    delete_from_sample(state_, sample_, event.edge);
}

void process_event(const EdgeEvent& event, PairingState& state,
                   SampleGraph& graph, EstimateLedger& ledger,
                   CountScratch& scratch) {
  std::uint64_t comparisons = 0;
  const auto c =
      contribution(SampleView(graph), event, DiscoveryInputs::from(state),
                   ledger.exact.has_value(), scratch, comparisons);
  ledger.estimate += c.value;
  if (ledger.exact) ledger.exact->add_scaled(c.scaled);
  ++ledger.events_processed;
  if (event.sign == Sign::Insert)
    insert_to_sample(state, graph, event.edge);
  else
    delete_from_sample(state, graph, event.edge);
}

RunResult run_abacus(std::span<const EdgeEvent> events, std::uint64_t budget,
                     std::uint64_t seed, AbacusOptions options) {
  Abacus abacus(budget, seed, options);
  for (const auto& ev : events) abacus.process(ev);
  return {std::move(abacus).take_ledger(), std::move(abacus).take_state(),
          std::move(abacus).take_sample()};
}

}  // namespace abacus

#include "abacus/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "abacus/errors.hpp"
#include "abacus/random.hpp"

namespace abacus {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
    line.remove_suffix(1);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool parse_sign(std::string_view token, Sign& out) {
  int v = 0;
  if (!parse_number(token, v)) return false;
  if (v == 1) {
    out = Sign::Insert;
    return true;
  }
  if (v == -1) {
    out = Sign::Delete;
    return true;
  }
  return false;
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

// First-seen remapping of raw file ids onto dense ordinals, one table per side.
class IdRemapper {
 public:
  std::optional<Ordinal> find(Side side, std::uint64_t raw) const {
    const auto& table = side == Side::Left ? left_ : right_;
    auto it = table.find(raw);
    if (it == table.end()) return std::nullopt;
    return it->second;
  }
  Ordinal get_or_assign(Side side, std::uint64_t raw) {
    auto& table = side == Side::Left ? left_ : right_;
    auto [it, inserted] =
        table.try_emplace(raw, static_cast<Ordinal>(table.size()));
    if (inserted) (side == Side::Left ? left_labels : right_labels).push_back(raw);
    return it->second;
  }

  std::vector<std::uint64_t> left_labels;
  std::vector<std::uint64_t> right_labels;

 private:
  std::unordered_map<std::uint64_t, Ordinal> left_;
  std::unordered_map<std::uint64_t, Ordinal> right_;
};

ParseResult parse_remapped(std::istream& in, InputFormat format) {
  ParseResult result;
  IdRemapper ids;
  std::unordered_set<Edge, EdgeHash> live;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    if (is_blank(view)) continue;
    const auto first = view.find_first_not_of(" \t");
    if (view[first] == '%' || view[first] == '#') continue;

    auto tokens = split_whitespace(view);
    std::uint64_t raw_left = 0;
    std::uint64_t raw_right = 0;
    Sign sign = Sign::Insert;
    bool ok = tokens.size() >= 2 && parse_number(tokens[0], raw_left) &&
              parse_number(tokens[1], raw_right);
    if (ok && format == InputFormat::PlainTsv) {
      if (tokens.size() == 3)
        ok = parse_sign(tokens[2], sign);
      else if (tokens.size() > 3)
        ok = false;
    }
    if (!ok) {
      ++result.warnings.malformed;
      continue;
    }

    if (sign == Sign::Insert) {
      Edge e{ids.get_or_assign(Side::Left, raw_left),
             ids.get_or_assign(Side::Right, raw_right)};
      if (!live.insert(e).second) {
        ++result.warnings.duplicates;
        continue;
      }
      result.events.push_back({e, Sign::Insert, 0});
    } else {
      auto l = ids.find(Side::Left, raw_left);
      auto r = ids.find(Side::Right, raw_right);
      if (!l || !r || live.erase(Edge{*l, *r}) == 0) {
        ++result.warnings.invalid_deletes;
        continue;
      }
      result.events.push_back({Edge{*l, *r}, Sign::Delete, 0});
    }
  }
  for (std::size_t i = 0; i < result.events.size(); ++i)
    result.events[i].index = i + 1;
  result.left_labels = std::move(ids.left_labels);
  result.right_labels = std::move(ids.right_labels);
  return result;
}

ParseResult parse_native(std::istream& in) {
  ParseResult result;
  std::string line;
  std::uint64_t last_index = 0;
  while (std::getline(in, line)) {
    std::string_view view(line);
    if (is_blank(view)) continue;
    if (view.starts_with("index,")) continue;
    auto fields = split_commas(view);
    EdgeEvent ev;
    bool ok = fields.size() == 4 && parse_number(fields[0], ev.index) &&
              parse_number(fields[1], ev.edge.left) &&
              parse_number(fields[2], ev.edge.right) &&
              parse_sign(fields[3], ev.sign) && ev.index > last_index;
    if (!ok) {
      ++result.warnings.malformed;
      continue;
    }
    last_index = ev.index;
    result.events.push_back(ev);
  }
  return result;
}

}  // namespace

InputFormat parse_format_name(std::string_view name) {
  if (name == "tsv") return InputFormat::PlainTsv;
  if (name == "konect") return InputFormat::Konect;
  if (name == "native") return InputFormat::Native;
  throw ConfigError("unknown input format '" + std::string(name) + "'");
}

ParseResult parse_edge_list(std::istream& in, InputFormat format) {
  if (!in) throw IoError("input stream is not readable");
  ParseResult result = format == InputFormat::Native
                           ? parse_native(in)
                           : parse_remapped(in, format);
  if (in.bad()) throw IoError("read error while parsing edge list");
  if (result.events.empty())
    throw EmptyStream("no parseable edge lines in input");
  return result;
}

ParseResult parse_edge_list_file(const std::string& path, InputFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_edge_list(in, format);
}

void write_native(std::ostream& out, std::span<const EdgeEvent> events) {
  out << "index,left,right,sign\n";
  for (const auto& ev : events)
    out << ev.index << ',' << ev.edge.left << ',' << ev.edge.right << ','
        << sign_value(ev.sign) << '\n';
}

void StreamValidityState::apply(const EdgeEvent& event) {
  if (event.sign == Sign::Insert) {
    if (!live_.insert(event.edge).second)
      throw StreamInvariantViolation(event.index, "insert of a live edge");
  } else if (live_.erase(event.edge) == 0) {
    throw StreamInvariantViolation(event.index, "delete of an absent edge");
  }
}

void validate_stream(std::span<const EdgeEvent> events) {
  StreamValidityState state;
  std::uint64_t last_index = 0;
  for (const auto& ev : events) {
    if (ev.index <= last_index)
      throw StreamInvariantViolation(ev.index, "index not strictly increasing");
    last_index = ev.index;
    state.apply(ev);
  }
}

EventStream generate_dynamic_stream(std::span<const EdgeEvent> base,
                                    double alpha, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ConfigError("deletion ratio alpha must lie in [0, 1]");
  {
    std::unordered_set<Edge, EdgeHash> seen;
    for (const auto& ev : base) {
      if (ev.sign != Sign::Insert || !seen.insert(ev.edge).second)
        throw ConfigError(
            "base stream must hold insertions of distinct edges only");
    }
  }

  const std::size_t n = base.size();
  // The epsilon absorbs representation error such as 0.29 * 100 < 29.
  auto deletions = static_cast<std::size_t>(
      std::floor(alpha * static_cast<double>(n) + 1e-9));
  deletions = std::min(deletions, n);

  Rng rng(seed);
  std::vector<std::size_t> positions(n);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  // gap g holds deletions emitted right after the g-th insertion (1-based).
  std::vector<std::vector<Edge>> gaps(n + 1);
  for (std::size_t d = 0; d < deletions; ++d) {
    std::size_t pick = d + uniform_index(rng, n - d);
    std::swap(positions[d], positions[pick]);
    const std::size_t pos = positions[d];
    const std::size_t gap = pos + 1 + uniform_index(rng, n - pos);
    gaps[gap].push_back(base[pos].edge);
  }

  EventStream out;
  out.reserve(n + deletions);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({base[i].edge, Sign::Insert, 0});
    for (const Edge& e : gaps[i + 1]) out.push_back({e, Sign::Delete, 0});
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i + 1;
  return out;
}

EventStream generate_bipartite_stream(const SyntheticGraphConfig& config) {
  const std::uint64_t capacity =
      static_cast<std::uint64_t>(config.left_vertices) * config.right_vertices;
  if (config.left_vertices == 0 || config.right_vertices == 0)
    throw ConfigError("synthetic graph needs vertices on both sides");
  if (config.edges > capacity)
    throw ConfigError("more edges requested than the bipartite graph holds");
  if (config.skew < 0.0) throw ConfigError("skew must be non-negative");

  Rng rng(config.seed);
  EventStream out;
  out.reserve(config.edges);

  if (config.skew == 0.0 && config.edges * 2 > capacity &&
      capacity <= (std::uint64_t{1} << 26)) {
    // Dense request: partial shuffle of the full key space.
    std::vector<std::uint64_t> keys(capacity);
    std::iota(keys.begin(), keys.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < config.edges; ++i) {
      std::swap(keys[i], keys[i + uniform_index(rng, capacity - i)]);
      out.push_back({Edge{static_cast<Ordinal>(keys[i] / config.right_vertices),
                          static_cast<Ordinal>(keys[i] % config.right_vertices)},
                     Sign::Insert, i + 1});
    }
    return out;
  }

  auto make_cdf = [&](Ordinal count) {
    std::vector<double> cdf(count);
    double total = 0.0;
    for (Ordinal i = 0; i < count; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i) + 1.0, config.skew);
      cdf[i] = total;
    }
    for (auto& c : cdf) c /= total;
    return cdf;
  };
  auto draw = [&](const std::vector<double>& cdf, Ordinal count) -> Ordinal {
    if (config.skew == 0.0)
      return static_cast<Ordinal>(uniform_index(rng, count));
    const double u = uniform_unit(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<Ordinal>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), count - 1));
  };
  std::vector<double> left_cdf;
  std::vector<double> right_cdf;
  if (config.skew != 0.0) {
    left_cdf = make_cdf(config.left_vertices);
    right_cdf = make_cdf(config.right_vertices);
  }

  std::unordered_set<Edge, EdgeHash> seen;
  const std::uint64_t max_attempts = 200 * config.edges + 1000;
  std::uint64_t attempts = 0;
  while (out.size() < config.edges) {
    if (++attempts > max_attempts)
      throw ConfigError("synthetic graph too dense for the requested skew");
    Edge e{draw(left_cdf, config.left_vertices),
           draw(right_cdf, config.right_vertices)};
    if (seen.insert(e).second) out.push_back({e, Sign::Insert, out.size() + 1});
  }
  return out;
}

std::uint64_t max_live_edges(std::span<const EdgeEvent> events) {
  std::int64_t live = 0;
  std::int64_t peak = 0;
  for (const auto& ev : events) {
    live += sign_value(ev.sign);
    peak = std::max(peak, live);
  }
  return static_cast<std::uint64_t>(peak);
}

}  // namespace abacus

#include "abacus/sample.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "abacus/errors.hpp"

namespace abacus {

void EdgeRegistry::add(const Edge& e) {
  auto [it, inserted] = position_.try_emplace(e.key(), edges_.size());
  if (!inserted) throw Error("edge already present in sample registry");
  edges_.push_back(e);
}

void EdgeRegistry::remove(const Edge& e) {
  auto it = position_.find(e.key());
  if (it == position_.end()) throw Error("edge missing from sample registry");
  const std::size_t slot = it->second;
  position_.erase(it);
  if (slot + 1 != edges_.size()) {
    edges_[slot] = edges_.back();
    position_[edges_[slot].key()] = slot;
  }
  edges_.pop_back();
}

namespace {

void insert_sorted(std::vector<Ordinal>& list, Ordinal x) {
  auto it = std::lower_bound(list.begin(), list.end(), x);
  if (it == list.end() || *it != x) list.insert(it, x);
}

}  // namespace

void Adjacency::link(const Edge& e) {
  insert_sorted(left_[e.left], e.right);
  insert_sorted(right_[e.right], e.left);
}

void Adjacency::unlink(const Edge& e) {
  auto drop = [](Table& t, Ordinal owner, Ordinal x) {
    auto it = t.find(owner);
    if (it == t.end()) return;
    auto& list = it->second;
    auto pos = std::lower_bound(list.begin(), list.end(), x);
    if (pos != list.end() && *pos == x) list.erase(pos);
    if (list.empty()) t.erase(it);
  };
  drop(left_, e.left, e.right);
  drop(right_, e.right, e.left);
}

std::span<const Ordinal> Adjacency::neighbors(Side side, Ordinal v) const {
  const auto& t = table(side);
  auto it = t.find(v);
  if (it == t.end()) return {};
  return it->second;
}

PairingState::PairingState(std::uint64_t budget_k, std::uint64_t seed)
    : budget(budget_k), rng(seed) {
  if (budget_k < 2) throw ConfigError("memory budget k must be at least 2");
}

void write_snapshot(std::ostream& out, const PairingState& state,
                    const SampleGraph& graph) {
  out << "budget,live_edges,c_bad,c_good,rng_state\n";
  out << state.budget << ',' << state.live_edges << ',' << state.c_bad << ','
      << state.c_good << ',' << state.rng << '\n';
  out << "left,right\n";
  for (const Edge& e : graph.edges()) out << e.left << ',' << e.right << '\n';
}

std::pair<PairingState, SampleGraph> read_snapshot(std::istream& in) {
  auto fail = [](const std::string& why) -> IoError {
    return IoError("malformed sample snapshot: " + why);
  };
  std::string line;
  if (!std::getline(in, line) ||
      line != "budget,live_edges,c_bad,c_good,rng_state")
    throw fail("missing state header");
  if (!std::getline(in, line)) throw fail("missing state row");

  std::istringstream row(line);
  std::uint64_t budget = 0;
  std::uint64_t live = 0;
  std::uint64_t bad = 0;
  std::uint64_t good = 0;
  char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  row >> budget >> c1 >> live >> c2 >> bad >> c3 >> good >> c4;
  if (!row || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
    throw fail("bad state row");
  PairingState state(budget, 0);
  state.live_edges = live;
  state.c_bad = bad;
  state.c_good = good;
  row >> state.rng;
  if (!row) throw fail("bad rng state");

  if (!std::getline(in, line) || line != "left,right")
    throw fail("missing edge header");
  SampleGraph graph;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream er(line);
    Edge e{};
    char comma = 0;
    er >> e.left >> comma >> e.right;
    if (!er || comma != ',') throw fail("bad edge row '" + line + "'");
    graph.add(e);
  }
  if (graph.size() > state.budget) throw fail("sample exceeds budget");
  return {std::move(state), std::move(graph)};
}

}  // namespace abacus

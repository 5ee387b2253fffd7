#include <algorithm>
#include <deque>
#include <functional>

#include "fjobf/cfa.hpp"

namespace fjobf::cfa {

namespace t = fjobf::target;
namespace s = fjobf::source;

int Cfg::add_node(const std::string& name) {
  if (int i = find(name); i >= 0) return i;
  nodes.push_back(name);
  return static_cast<int>(nodes.size()) - 1;
}

int Cfg::find(const std::string& name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

bool Cfg::has_edge(const std::string& from, const std::string& to) const {
  int a = find(from), b = find(to);
  if (a < 0 || b < 0) return false;
  for (const auto& [x, y, tag] : edges)
    if (x == a && y == b) return true;
  return false;
}

Cfg build_cfg(const t::ProgramIndex& index, const AnalysisResult& r, int entry) {
  std::map<int, std::set<int>> succ;
  for (const auto& e : r.edges) succ[e.caller].insert(e.callee);

  std::set<int> keep;
  std::vector<int> order;
  if (entry >= 0) {
    std::deque<int> q{entry};
    keep.insert(entry);
    while (!q.empty()) {
      int c = q.front();
      q.pop_front();
      order.push_back(c);
      for (int n : succ[c])
        if (keep.insert(n).second) q.push_back(n);
    }
  } else {
    for (const auto& a : r.reached) keep.insert(a.callable);
    order.assign(keep.begin(), keep.end());
  }
  std::sort(order.begin(), order.end());

  Cfg g;
  std::map<int, int> node_of;
  for (int c : order) node_of[c] = g.add_node(index.at(c).display);
  for (const auto& e : r.edges)
    if (keep.count(e.caller) && keep.count(e.callee)) g.edges.insert({node_of[e.caller], node_of[e.callee], e.tag});
  g.entry = entry >= 0 ? node_of[entry] : (g.nodes.empty() ? -1 : 0);
  return g;
}

namespace {

void source_edges(const std::vector<s::Block>& blocks, std::optional<int> follow, std::optional<int> handler,
                  Cfg& g) {
  auto node = [&](const s::Block& b) { return g.find(b.label); };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const s::Block& b = blocks[i];
    int me = node(b);
    bool last = i + 1 == blocks.size();
    std::optional<int> next = last ? follow : std::optional<int>(node(blocks[i + 1]));
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::Assigns>) {
            if (next) g.edges.insert({me, *next, Tag::Plain});
          } else if constexpr (std::is_same_v<T, s::MethodCall>) {
            if (next) g.edges.insert({me, *next, Tag::Plain});
            if (handler) g.edges.insert({me, *handler, Tag::Plain});
          } else if constexpr (std::is_same_v<T, s::Return>) {
            if (!last && next) g.edges.insert({me, *next, Tag::Plain});
          } else if constexpr (std::is_same_v<T, s::Throw>) {
            if (handler) g.edges.insert({me, *handler, Tag::Plain});
          } else if constexpr (std::is_same_v<T, s::IfElse>) {
            auto head = [&](const std::vector<s::Block>& arm) {
              return arm.empty() ? next : std::optional<int>(node(arm.front()));
            };
            if (auto h = head(n.then_blocks)) g.edges.insert({me, *h, Tag::True});
            if (auto h = head(n.else_blocks)) g.edges.insert({me, *h, Tag::False});
            source_edges(n.then_blocks, next, handler, g);
            source_edges(n.else_blocks, next, handler, g);
          } else if constexpr (std::is_same_v<T, s::While>) {
            g.edges.insert({me, n.body.empty() ? me : node(n.body.front()), Tag::True});
            if (next) g.edges.insert({me, *next, Tag::False});
            source_edges(n.body, me, handler, g);
          } else {
            std::optional<int> catch_head =
                n.catch_blocks.empty() ? next : std::optional<int>(node(n.catch_blocks.front()));
            if (!n.try_blocks.empty()) g.edges.insert({me, node(n.try_blocks.front()), Tag::Plain});
            source_edges(n.try_blocks, next, catch_head, g);
            source_edges(n.catch_blocks, next, handler, g);
          }
        },
        b.body);
  }
}

}  // namespace

Cfg source_cfg(const s::SourceMethod& md) {
  Cfg g;
  s::for_each_block(md.body, [&](const s::Block& b) { g.add_node(b.label); });
  source_edges(md.body, std::nullopt, std::nullopt, g);
  g.entry = g.nodes.empty() ? -1 : 0;
  return g;
}

// Johnson's elementary circuit enumeration, restricted at each start node to
// the nodes numbered at or above it.
std::vector<std::vector<int>> simple_cycles(const Cfg& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::set<int>> adj(n);
  for (const auto& [a, b, tag] : g.edges) adj[a].insert(b);

  std::vector<std::vector<int>> out;
  std::vector<bool> blocked(n);
  std::vector<std::set<int>> bset(n);
  std::vector<int> stack;

  std::function<void(int)> unblock = [&](int u) {
    blocked[u] = false;
    while (!bset[u].empty()) {
      int w = *bset[u].begin();
      bset[u].erase(bset[u].begin());
      if (blocked[w]) unblock(w);
    }
  };

  for (int start = 0; start < n; ++start) {
    std::fill(blocked.begin(), blocked.end(), false);
    for (auto& b : bset) b.clear();
    std::function<bool(int)> circuit = [&](int v) -> bool {
      bool found = false;
      stack.push_back(v);
      blocked[v] = true;
      for (int w : adj[v]) {
        if (w < start) continue;
        if (w == start) {
          out.push_back(stack);
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (int w : adj[v])
          if (w >= start) bset[w].insert(v);
      }
      stack.pop_back();
      return found;
    };
    circuit(start);
  }
  return out;
}

std::size_t count_simple_cycles(const Cfg& g) { return simple_cycles(g).size(); }

const char* iso_name(IsoOutcome o) {
  switch (o) {
    case IsoOutcome::Yes: return "yes";
    case IsoOutcome::No: return "no";
    default: return "budget-exceeded";
  }
}

IsoResult subgraph_isomorphic(const Cfg& pattern, const Cfg& host, std::uint64_t budget) {
  IsoResult res;
  const int np = static_cast<int>(pattern.size());
  const int nh = static_cast<int>(host.size());
  if (np > nh) return res;
  if (np == 0) {
    res.outcome = IsoOutcome::Yes;
    return res;
  }

  auto matrix = [](const Cfg& g) {
    std::vector<std::vector<bool>> m(g.size(), std::vector<bool>(g.size()));
    for (const auto& [a, b, tag] : g.edges) m[a][b] = true;
    return m;
  };
  auto pm = matrix(pattern);
  auto hm = matrix(host);
  auto degrees = [](const std::vector<std::vector<bool>>& m) {
    std::vector<std::pair<int, int>> d(m.size());
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = 0; b < m.size(); ++b)
        if (m[a][b]) {
          d[a].first++;
          d[b].second++;
        }
    return d;
  };
  auto pd = degrees(pm);
  auto hd = degrees(hm);

  // Visit pattern nodes so that each one after the first touches an earlier
  // one whenever the pattern is connected.
  std::vector<int> order;
  std::vector<bool> seen(np);
  for (int root = 0; root < np; ++root) {
    if (seen[root]) continue;
    std::deque<int> q{root};
    seen[root] = true;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      order.push_back(u);
      for (int v = 0; v < np; ++v)
        if (!seen[v] && (pm[u][v] || pm[v][u])) {
          seen[v] = true;
          q.push_back(v);
        }
    }
  }

  std::vector<int> map(np, -1);
  std::vector<bool> used(nh);
  bool exceeded = false;
  std::function<bool(std::size_t)> extend = [&](std::size_t i) -> bool {
    if (i == order.size()) return true;
    int p = order[i];
    for (int h = 0; h < nh; ++h) {
      if (used[h]) continue;
      if (++res.states > budget) {
        exceeded = true;
        return false;
      }
      if (hd[h].first < pd[p].first || hd[h].second < pd[p].second) continue;
      if (pm[p][p] && !hm[h][h]) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        int q = order[j];
        if (pm[p][q] && !hm[h][map[q]]) ok = false;
        if (pm[q][p] && !hm[map[q]][h]) ok = false;
      }
      if (!ok) continue;
      map[p] = h;
      used[h] = true;
      if (extend(i + 1)) return true;
      if (exceeded) return false;
      map[p] = -1;
      used[h] = false;
    }
    return false;
  };

  if (extend(0)) {
    res.outcome = IsoOutcome::Yes;
    res.mapping = map;
  } else {
    res.outcome = exceeded ? IsoOutcome::BudgetExceeded : IsoOutcome::No;
  }
  return res;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Cfg& g, const std::string& name) {
  std::string out = "digraph " + name + " {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(g.nodes[i]) + "\"];\n";
  for (const auto& [a, b, tag] : g.edges) {
    out += "  n" + std::to_string(a) + " -> n" + std::to_string(b);
    if (tag != Tag::Plain) out += std::string(" [label=\"") + tag_name(tag) + "\"]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace fjobf::cfa

#include "mstproj/automata.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace mstproj {

std::string to_string(const SyncEvent& e) {
  return e.sender.value + "->" + e.receiver.value + ":" + e.message.value;
}

std::string to_string(const AsyncEvent& e) {
  return e.active.value + (e.is_send() ? ">" : "<") + e.peer.value + (e.is_send() ? "!" : "?") +
         e.message.value;
}

std::string format_trace(std::span<const AsyncEvent> w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += to_string(w[i]);
  }
  return out;
}

namespace {

AsyncEvent parse_token(std::string_view tok) {
  auto bad = [&] { return std::invalid_argument("malformed event '" + std::string(tok) + "'"); };
  auto dir = tok.find_first_of("<>");
  if (dir == std::string_view::npos || dir == 0) throw bad();
  bool send = tok[dir] == '>';
  auto mark = tok.find(send ? '!' : '?', dir + 1);
  if (mark == std::string_view::npos || mark == dir + 1 || mark + 1 == tok.size()) throw bad();
  Role active(std::string(tok.substr(0, dir)));
  Role peer(std::string(tok.substr(dir + 1, mark - dir - 1)));
  Message msg(std::string(tok.substr(mark + 1)));
  return send ? AsyncEvent::send(active, peer, msg) : AsyncEvent::receive(active, peer, msg);
}

}  // namespace

Trace parse_trace(std::string_view text) {
  Trace out;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto dot = text.find('.', start);
    out.push_back(parse_token(text.substr(start, dot == std::string_view::npos ? dot : dot - start)));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return out;
}

std::pair<AsyncEvent, AsyncEvent> split(const SyncEvent& e) {
  return {AsyncEvent::send(e.sender, e.receiver, e.message),
          AsyncEvent::receive(e.receiver, e.sender, e.message)};
}

Trace split_word(std::span<const SyncEvent> w) {
  Trace out;
  out.reserve(2 * w.size());
  for (const auto& e : w) {
    auto [s, r] = split(e);
    out.push_back(std::move(s));
    out.push_back(std::move(r));
  }
  return out;
}

Trace project(std::span<const AsyncEvent> w, const Role& p) {
  Trace out;
  for (const auto& e : w) {
    if (e.active == p) out.push_back(e);
  }
  return out;
}

std::optional<AsyncEvent> erase_label(const SyncEvent& e, const Role& p) {
  if (e.sender == p) return AsyncEvent::send(e.sender, e.receiver, e.message);
  if (e.receiver == p) return AsyncEvent::receive(e.receiver, e.sender, e.message);
  return std::nullopt;
}

template <class Label>
SubtermAutomaton<Label>::SubtermAutomaton(std::vector<NodeId> states, std::vector<Edge<Label>> transitions,
                                          NodeId initial, std::vector<NodeId> finals, std::size_t id_bound)
    : states_(std::move(states)),
      transitions_(std::move(transitions)),
      initial_(initial),
      finals_(std::move(finals)) {
  std::sort(states_.begin(), states_.end());
  std::sort(finals_.begin(), finals_.end());
  std::sort(transitions_.begin(), transitions_.end());
  transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  offsets_.assign(id_bound + 1, 0);
  for (const auto& t : transitions_) ++offsets_[t.source.value + 1];
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

template <class Label>
bool SubtermAutomaton<Label>::is_final(NodeId id) const {
  return std::binary_search(finals_.begin(), finals_.end(), id);
}

template <class Label>
std::span<const Edge<Label>> SubtermAutomaton<Label>::out(NodeId id) const {
  if (id.value + 1 >= offsets_.size()) return {};
  return std::span<const Edge<Label>>(transitions_.data() + offsets_[id.value],
                                      offsets_[id.value + 1] - offsets_[id.value]);
}

template class SubtermAutomaton<SyncEvent>;
template class SubtermAutomaton<AsyncEvent>;

SyncAutomaton build_gaut(const GlobalType& g) {
  std::vector<NodeId> states = g.subterms();
  std::vector<SyncTransition> edges;
  for (NodeId id : states) {
    const Node& n = g.node(id);
    switch (n.kind) {
      case NodeKind::End:
        break;
      case NodeKind::Choice:
        for (const auto& b : n.branches) {
          edges.push_back({id, SyncEvent{n.sender, b.receiver, b.message}, b.next});
        }
        break;
      case NodeKind::Rec:
        edges.push_back({id, std::nullopt, n.body});
        break;
      case NodeKind::Var: {
        auto binder = g.binder(n.var);
        if (!binder) require_well_formed(g);
        if (!binder) throw std::logic_error("variable without a unique binder: " + n.var.value);
        edges.push_back({id, std::nullopt, *binder});
        break;
      }
    }
  }
  std::vector<NodeId> finals;
  if (auto e = g.end_node()) finals.push_back(*e);
  return SyncAutomaton(std::move(states), std::move(edges), g.root(), std::move(finals), g.node_count());
}

LocalNfa erase(const SyncAutomaton& a, const Role& p) {
  std::vector<LocalTransition> edges;
  edges.reserve(a.transitions().size());
  for (const auto& t : a.transitions()) {
    std::optional<AsyncEvent> label;
    if (t.label) label = erase_label(*t.label, p);
    edges.push_back({t.source, std::move(label), t.target});
  }
  return LocalNfa(p, SubtermAutomaton<AsyncEvent>(a.states(), std::move(edges), a.initial(), a.finals(),
                                                  a.id_bound()));
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

template <class Label>
std::string dot_of(const SubtermAutomaton<Label>& a, const GlobalType& g, const std::string& name) {
  std::string out = "digraph \"" + escape(name) + "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (NodeId id : a.states()) {
    out += "  n" + std::to_string(id.value) + " [shape=" + (a.is_final(id) ? "doublecircle" : "circle") +
           ", label=\"" + escape(render_subterm(g, id)) + "\"];\n";
  }
  out += "  init -> n" + std::to_string(a.initial().value) + ";\n";
  for (const auto& t : a.transitions()) {
    out += "  n" + std::to_string(t.source.value) + " -> n" + std::to_string(t.target.value) + " [label=\"" +
           escape(t.label ? to_string(*t.label) : std::string("ε")) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace

std::string to_dot(const SyncAutomaton& a, const GlobalType& g) { return dot_of(a, g, "GAut"); }

std::string to_dot(const LocalNfa& a, const GlobalType& g) { return dot_of(a, g, "GAut_" + a.role().value); }

}  // namespace mstproj

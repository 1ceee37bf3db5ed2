#include "mstproj/syntax.hpp"

namespace mstproj {

namespace {

std::string prefix_text(const Role& sender, const Branch& b) {
  return sender.value + "->" + b.receiver.value + ":" + b.message.value + " . ";
}

void print(const GlobalType& g, NodeId id, int indent, std::string& out) {
  const Node& n = g.node(id);
  switch (n.kind) {
    case NodeKind::End:
      out += "0";
      return;
    case NodeKind::Var:
      out += n.var.value;
      return;
    case NodeKind::Rec:
      out += "mu " + n.var.value + " . ";
      print(g, n.body, indent, out);
      return;
    case NodeKind::Choice:
      if (n.branches.size() == 1) {
        out += prefix_text(n.sender, n.branches.front());
        print(g, n.branches.front().next, indent, out);
        return;
      }
      out += "+ {\n";
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        out.append(static_cast<std::size_t>(indent + 2), ' ');
        out += prefix_text(n.sender, n.branches[i]);
        print(g, n.branches[i].next, indent + 2, out);
        out += (i + 1 < n.branches.size()) ? ",\n" : "\n";
      }
      out.append(static_cast<std::size_t>(indent), ' ');
      out += "}";
      return;
  }
}

void render(const GlobalType& g, NodeId id, std::string& out) {
  const Node& n = g.node(id);
  switch (n.kind) {
    case NodeKind::End:
      out += "0";
      return;
    case NodeKind::Var:
      out += n.var.value;
      return;
    case NodeKind::Rec:
      out += "mu " + n.var.value + " . ";
      render(g, n.body, out);
      return;
    case NodeKind::Choice:
      if (n.branches.size() == 1) {
        out += prefix_text(n.sender, n.branches.front());
        render(g, n.branches.front().next, out);
        return;
      }
      out += "+ { ";
      for (std::size_t i = 0; i < n.branches.size(); ++i) {
        if (i) out += ", ";
        out += prefix_text(n.sender, n.branches[i]);
        render(g, n.branches[i].next, out);
      }
      out += " }";
      return;
  }
}

}  // namespace

std::string pretty_print(const GlobalType& g) {
  std::string out;
  print(g, g.root(), 0, out);
  out += "\n";
  return out;
}

std::string render_subterm(const GlobalType& g, NodeId id) {
  std::string out;
  render(g, id, out);
  return out;
}

}  // namespace mstproj

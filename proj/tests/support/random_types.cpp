#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace mstproj::testing {

GlobalType parse(std::string_view text) {
  GlobalType g = parse_global_type(text);
  require_well_formed(g);
  return g;
}

NodeId find_subterm(const GlobalType& g, std::string_view text) {
  for (NodeId id : g.subterms()) {
    if (render_subterm(g, id) == text) return id;
  }
  throw std::runtime_error("no subterm " + std::string(text));
}

namespace {

std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(MSTPROJ_CORPUS_DIR) + "/" + name + ".gt");
  if (!in) throw std::runtime_error("missing corpus entry " + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

GlobalType corpus(const std::string& name) { return parse(read_corpus(name)); }

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(MSTPROJ_CORPUS_DIR)) {
    if (e.path().extension() == ".gt") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> implementable_corpus_names() {
  std::vector<std::string> out;
  for (const auto& name : corpus_names()) {
    if (read_corpus(name).find("Expected: implementable") != std::string::npos) out.push_back(name);
  }
  return out;
}

namespace {

class Generator {
 public:
  explicit Generator(std::mt19937& rng) : rng_(rng) {}

  NodeId type(int budget, std::vector<RecVar>& scope) {
    int pick = uniform(0, 9);
    if (budget <= 1 || pick < 2) {
      if (!scope.empty() && uniform(0, 1) == 0) return arena_.var(scope[uniform(0, static_cast<int>(scope.size()) - 1)]);
      return arena_.end();
    }
    if (pick < 4) {
      RecVar v("t" + std::to_string(next_var_++));
      scope.push_back(v);
      NodeId body = choice(budget - 1, scope);
      scope.pop_back();
      return arena_.rec(v, body);
    }
    return choice(budget, scope);
  }

  GlobalTypeBuilder& builder() { return builder_; }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  NodeId choice(int budget, std::vector<RecVar>& scope) {
    static const char* roles[] = {"p", "q", "r", "s"};
    static const char* messages[] = {"a", "b", "c"};
    Role sender(roles[uniform(0, 3)]);
    int width = budget > 4 ? uniform(1, 3) : 1;
    std::vector<Branch> branches;
    std::vector<std::pair<Role, Message>> used;
    int share = std::max(1, (budget - 1) / width);
    for (int i = 0; i < width; ++i) {
      Role receiver(roles[uniform(0, 3)]);
      while (receiver == sender) receiver = Role(roles[uniform(0, 3)]);
      Message m(messages[uniform(0, 2)]);
      if (std::find(used.begin(), used.end(), std::make_pair(receiver, m)) != used.end()) continue;
      used.emplace_back(receiver, m);
      branches.push_back({receiver, m, type(share, scope)});
    }
    return arena_.choice(sender, std::move(branches));
  }

  std::mt19937& rng_;
  GlobalTypeBuilder builder_;
  NodeArena& arena_ = builder_.arena();
  int next_var_ = 0;
};

}  // namespace

GlobalType random_global_type(std::mt19937& rng, std::size_t max_size) {
  for (;;) {
    Generator gen(rng);
    std::vector<RecVar> scope;
    int budget = std::uniform_int_distribution<int>(2, 12)(rng);
    NodeId root = gen.type(budget, scope);
    GlobalType g = gen.builder().build(root);
    if (measure_size(g) <= max_size && validate_well_formedness(g).ok()) return g;
  }
}

}  // namespace mstproj::testing

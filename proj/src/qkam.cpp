#include "alkam/qkam.hpp"

#include <deque>
#include <functional>
#include <stdexcept>
#include <utility>

namespace alkam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Shadow-respecting rename of the free occurrences of `from`; `to` is fresh.
ResPtr res_rename(const ResPtr& t, const std::string& from, const std::string& to);

Bag bag_rename(const Bag& bag, const std::string& from, const std::string& to) {
  Bag out;
  for (const auto& [u, m] : bag.items()) out.insert(res_rename(u, from, to), m);
  return out;
}

ResPtr res_rename(const ResPtr& t, const std::string& from, const std::string& to) {
  return std::visit(
      overloaded{
          [&](const ResTerm::Var& v) { return v.name == from ? mk_rvar(to) : t; },
          [&](const ResTerm::C0&) { return t; },
          [&](const ResTerm::Abs& a) {
            if (a.var == from) return t;
            return mk_rabs(a.var, res_rename(a.body, from, to));
          },
          [&](const ResTerm::App& ap) {
            return mk_rapp(res_rename(ap.fun, from, to), bag_rename(ap.arg, from, to));
          },
      },
      t->node);
}

// The single element of a one-term bag, or null.
const ResPtr* singleton(const Bag& bag) {
  if (bag.items().size() != 1 || bag.items().front().second != 1) return nullptr;
  return &bag.items().front().first;
}

}  // namespace

// ------------------------- resource environments -------------------------

bool res_env_empty(const ResEnv& env) { return !env || env->bindings.empty(); }

bool closure_is_unit(const ResClosure& c) { return c.bag.empty() && res_env_empty(c.env); }

ResEnv res_env_bind(const ResEnv& env, const std::string& name, ResClosure closure) {
  ResEnvNode node;
  if (env) node.bindings = env->bindings;
  if (closure_is_unit(closure))
    node.bindings.erase(name);
  else
    node.bindings.insert_or_assign(name, std::move(closure));
  if (node.bindings.empty()) return nullptr;
  return std::make_shared<const ResEnvNode>(std::move(node));
}

const ResClosure* res_env_lookup(const ResEnv& env, const std::string& name) {
  if (!env) return nullptr;
  auto it = env->bindings.find(name);
  return it == env->bindings.end() ? nullptr : &it->second;
}

std::set<std::string> res_env_domain(const ResEnv& env) {
  std::set<std::string> out;
  if (env)
    for (const auto& [name, c] : env->bindings) out.insert(name);
  return out;
}

ResClosure closure_concat(const ResClosure& a, const ResClosure& b) {
  return ResClosure{bag_union(a.bag, b.bag), res_env_concat(a.env, b.env)};
}

ResEnv res_env_concat(const ResEnv& a, const ResEnv& b) {
  if (res_env_empty(a)) return res_env_empty(b) ? nullptr : b;
  if (res_env_empty(b)) return a;
  ResEnv out = a;
  for (const auto& [name, closure] : b->bindings) {
    const ResClosure* mine = res_env_lookup(out, name);
    out = res_env_bind(out, name, mine ? closure_concat(*mine, closure) : closure);
  }
  return out;
}

// ------------------------------ splittings ------------------------------

std::vector<std::pair<ResClosure, ResClosure>> closure_splittings(const ResClosure& c,
                                                                  bool prune) {
  std::vector<std::pair<ResClosure, ResClosure>> out;
  const auto bags = bag_splittings(c.bag);
  const auto envs = env_splittings(c.env, prune);
  for (const auto& [b1, b2] : bags)
    for (const auto& [f1, f2] : envs) {
      if (prune && ((b1.empty() && !res_env_empty(f1)) || (b2.empty() && !res_env_empty(f2))))
        continue;
      out.emplace_back(ResClosure{b1, f1}, ResClosure{b2, f2});
    }
  return out;
}

std::vector<std::pair<ResEnv, ResEnv>> env_splittings(const ResEnv& env, bool prune) {
  std::vector<std::pair<ResEnv, ResEnv>> out{{nullptr, nullptr}};
  if (!env) return out;
  for (const auto& [name, closure] : env->bindings) {
    const auto parts = closure_splittings(closure, prune);
    std::vector<std::pair<ResEnv, ResEnv>> next;
    next.reserve(out.size() * parts.size());
    for (const auto& [e1, e2] : out)
      for (const auto& [c1, c2] : parts)
        next.emplace_back(res_env_bind(e1, name, c1), res_env_bind(e2, name, c2));
    out = std::move(next);
  }
  return out;
}

// ----------------------------- sizes, measure -----------------------------

std::size_t res_size(const ResClosure& c) { return bag_size(c.bag) + res_size(c.env); }

std::size_t res_size(const ResEnv& env) {
  std::size_t total = 0;
  if (env)
    for (const auto& [name, c] : env->bindings) total += res_size(c);
  return total;
}

std::size_t res_size(const ResConfig& r) {
  std::size_t total = bag_size(r.control) + res_size(r.env);
  for (const auto& c : r.stack) total += res_size(c);
  return total;
}

std::pair<std::size_t, std::size_t> config_measure(const PairedConfig& pc) {
  return {res_size(pc.res), term_size(pc.alg.term)};
}

// ------------------------------- printing -------------------------------

std::string to_string(const ResClosure& c) {
  return "(" + to_string(c.bag) + ", " + to_string(c.env) + ")";
}

std::string to_string(const ResEnv& env) {
  std::string out = "{";
  bool first = true;
  if (env)
    for (const auto& [name, c] : env->bindings) {
      if (!first) out += ", ";
      first = false;
      out += name + " -> " + to_string(c);
    }
  return out + "}";
}

std::string to_string(const ResConfig& r) {
  std::string out = to_string(r.control) + " | " + to_string(r.env) + " | [";
  for (auto it = r.stack.rbegin(); it != r.stack.rend(); ++it) {
    if (it != r.stack.rbegin()) out += "; ";
    out += to_string(*it);
  }
  return out + "]";
}

// ------------------------------ coefficient ------------------------------

namespace {

using Measure = std::pair<std::size_t, std::size_t>;

struct CoeffEngine {
  const Semiring& sr;
  QkamOptions opts;
  std::map<std::string, Scalar> memo;

  Scalar value(const PairedConfig& pc) {
    const std::string key = to_string(pc.alg) + " # " + to_string(pc.res);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Scalar v = compute(pc);
    memo.emplace(std::move(key), v);
    return v;
  }

  Scalar recurse(PairedConfig child, const Measure& parent) {
    if (opts.check_measure && !(config_measure(child) < parent))
      throw std::logic_error("paired machine measure did not decrease");
    return value(child);
  }

  Scalar compute(const PairedConfig& pc) {
    const Measure measure = config_measure(pc);
    const AlgState& alg = pc.alg;
    const ResConfig& res = pc.res;
    return std::visit(
        overloaded{
            [&](const AlgTerm::C0&) {
              if (!alg.stack.empty()) return sr.zero();
              const ResPtr* item = singleton(res.control);
              const bool base = item && std::holds_alternative<ResTerm::C0>((*item)->node) &&
                                res_env_empty(res.env) && res.stack.empty();
              return base ? sr.one() : sr.zero();
            },
            [&](const AlgTerm::Zero&) { return sr.zero(); },
            [&](const AlgTerm::Scale& s) {
              PairedConfig child{AlgState{s.term, alg.env, alg.stack}, res};
              return mul(s.factor, recurse(std::move(child), measure));
            },
            [&](const AlgTerm::Sum& s) {
              PairedConfig left{AlgState{s.lhs, alg.env, alg.stack}, res};
              PairedConfig right{AlgState{s.rhs, alg.env, alg.stack}, res};
              return add(recurse(std::move(left), measure), recurse(std::move(right), measure));
            },
            [&](const AlgTerm::Var& v) {
              const AlgClosure* bound = env_lookup(alg.env, v.name);
              if (!bound) return sr.zero();
              const ResPtr* item = singleton(res.control);
              if (!item || !std::holds_alternative<ResTerm::Var>((*item)->node) ||
                  std::get<ResTerm::Var>((*item)->node).name != v.name)
                return sr.zero();
              if (res.env)
                for (const auto& [name, c] : res.env->bindings)
                  if (name != v.name) return sr.zero();
              ResClosure taken;  // the unit when the entry is absent
              if (const ResClosure* entry = res_env_lookup(res.env, v.name)) taken = *entry;
              PairedConfig child{AlgState{bound->term, bound->env, alg.stack},
                                 ResConfig{taken.bag, taken.env, res.stack}};
              return recurse(std::move(child), measure);
            },
            [&](const AlgTerm::Abs& a) {
              if (alg.stack.empty() || res.stack.empty()) return sr.zero();
              const ResPtr* item = singleton(res.control);
              if (!item || !std::holds_alternative<ResTerm::Abs>((*item)->node)) return sr.zero();
              const auto& ra = std::get<ResTerm::Abs>((*item)->node);
              if (res_env_lookup(res.env, ra.var)) return sr.zero();
              AlgPtr alg_body = a.body;
              ResPtr res_body = ra.body;
              std::string bound = a.var;
              if (env_lookup(alg.env, a.var) || a.var != ra.var) {
                std::set<std::string> avoid = env_domain(alg.env);
                avoid.merge(res_env_domain(res.env));
                collect_names(a.body, avoid);
                collect_names(ra.body, avoid);
                avoid.insert(a.var);
                avoid.insert(ra.var);
                bound = fresh_name(a.var, avoid);
                alg_body = subst(a.body, a.var, mk_var(bound));
                res_body = res_rename(ra.body, ra.var, bound);
              }
              PairedConfig child{AlgState{alg_body, env_bind(alg.env, bound, alg.stack.back()),
                                          {alg.stack.begin(), alg.stack.end() - 1}},
                                 ResConfig{Bag{}, res_env_bind(res.env, bound, res.stack.back()),
                                           {res.stack.begin(), res.stack.end() - 1}}};
              child.res.control.insert(res_body);
              return recurse(std::move(child), measure);
            },
            [&](const AlgTerm::App& ap) {
              const ResPtr* item = singleton(res.control);
              if (!item || !std::holds_alternative<ResTerm::App>((*item)->node)) return sr.zero();
              const auto& rap = std::get<ResTerm::App>((*item)->node);
              Scalar total = sr.zero();
              for (auto& [keep, pass] : env_splittings(res.env, opts.prune)) {
                PairedConfig child{AlgState{ap.fun, alg.env, alg.stack},
                                   ResConfig{Bag{}, keep, res.stack}};
                child.alg.stack.push_back(AlgClosure{ap.arg, alg.env});
                child.res.control.insert(rap.fun);
                child.res.stack.push_back(ResClosure{rap.arg, pass});
                total = add(total, recurse(std::move(child), measure));
              }
              return total;
            },
        },
        alg.term->node);
  }
};

}  // namespace

Scalar coefficient(const PairedConfig& pc, const Semiring& sr, const QkamOptions& opts) {
  CoeffEngine engine{sr, opts, {}};
  return engine.value(pc);
}

Scalar k_hat(const AlgPtr& term, const ResPtr& t, const Semiring& sr, const QkamOptions& opts) {
  if (!free_vars(term).empty()) throw NotClosed("machine coefficients need a closed term");
  PairedConfig pc{initial_state(term), ResConfig{Bag{}, nullptr, {}}};
  pc.res.control.insert(t);
  return coefficient(pc, sr, opts);
}

// ------------------------- forward annotation walk -------------------------
//
// The machine is run forward and the simple terms it could consume are built
// on the way: an application pushes an instance whose eventual dereferences
// fill the bag at that application, an abstraction binds the top instance,
// and a variable step both leaves a leaf and opens a fresh subtree for the
// continuation of the instance it fetched. A run that reaches the constant
// with an empty stack has built exactly one annotation, whose size equals
// the structural steps spent, so the size bound prunes the search exactly.

namespace {

struct GInst;

struct GEnvNode {
  std::map<std::string, GInst*> bindings;
};
using GEnv = std::shared_ptr<const GEnvNode>;

struct GNode {
  enum class Kind { Hole, VarLeaf, C0Leaf, Abs, App } kind = Kind::Hole;
  std::string name;        // VarLeaf: the variable; Abs: the binder
  GNode* child = nullptr;  // Abs, App
  GInst* source = nullptr; // App: instance whose uses form the bag
};

struct GUse {
  GNode* root;       // annotation subtree this dereference consumes
  GUse* parent;      // use whose continuation performed it; null for the main run
  GInst* owner;      // instance it dereferences
  std::size_t time;  // row index of the dereferencing configuration
};

struct GInst {
  AlgPtr term;
  GEnv env;
  std::size_t push_time;
  std::vector<GUse*> uses;  // dereference order
};

GEnv g_bind(const GEnv& env, const std::string& name, GInst* inst) {
  GEnvNode node;
  if (env) node.bindings = env->bindings;
  node.bindings.insert_or_assign(name, inst);
  return std::make_shared<const GEnvNode>(std::move(node));
}

GInst* g_lookup(const GEnv& env, const std::string& name) {
  if (!env) return nullptr;
  auto it = env->bindings.find(name);
  return it == env->bindings.end() ? nullptr : it->second;
}

std::set<std::string> g_domain(const GEnv& env) {
  std::set<std::string> out;
  if (env)
    for (const auto& [name, inst] : env->bindings) out.insert(name);
  return out;
}

struct StepRecord {
  AlgPtr control;
  GEnv env;
  std::vector<GInst*> stack;
  GNode* hole;
  GUse* ctx;
  std::string note;
};

struct Walker {
  Walker(const Semiring& semiring, std::size_t bound) : sr(semiring), max_size(bound) {}

  const Semiring& sr;
  std::size_t max_size;

  Combination* out = nullptr;  // collect every annotation

  const ResPtr* target = nullptr;  // or trace the run building this one
  QkamOptions trace_opts;
  std::vector<StepRecord> path;
  std::vector<TraceRow> rows;
  bool found = false;

  std::deque<GInst> inst_arena;
  std::deque<GNode> node_arena;
  std::deque<GUse> use_arena;
  GNode* root = nullptr;

  std::map<const GEnvNode*, AlgEnv> env_memo;

  void run(const AlgPtr& term) {
    node_arena.emplace_back();
    root = &node_arena.back();
    walk(term, nullptr, {}, root, sr.one(), max_size, nullptr, 0);
  }

  GNode* fresh_node() {
    node_arena.emplace_back();
    return &node_arena.back();
  }

  void walk(const AlgPtr& control, const GEnv& env, const std::vector<GInst*>& stack,
            GNode* hole, const Scalar& weight, std::size_t left, GUse* ctx, std::size_t time) {
    if (found) return;
    const bool tracing = target != nullptr;
    if (tracing) path.push_back(StepRecord{control, env, stack, hole, ctx, ""});
    std::visit(
        overloaded{
            [&](const AlgTerm::C0&) {
              if (!stack.empty() || left < 1) return;
              if (tracing) path.back().note = "constant";
              hole->kind = GNode::Kind::C0Leaf;
              accept(weight);
              hole->kind = GNode::Kind::Hole;
            },
            [&](const AlgTerm::Zero&) {},
            [&](const AlgTerm::Scale& s) {
              const Scalar scaled = mul(weight, s.factor);
              if (is_zero(scaled)) return;
              if (tracing) path.back().note = "scale";
              walk(s.term, env, stack, hole, scaled, left, ctx, time + 1);
            },
            [&](const AlgTerm::Sum& s) {
              if (tracing) path.back().note = "sum";
              walk(s.lhs, env, stack, hole, weight, left, ctx, time + 1);
              walk(s.rhs, env, stack, hole, weight, left, ctx, time + 1);
            },
            [&](const AlgTerm::Var& v) {
              GInst* inst = g_lookup(env, v.name);
              if (!inst || left < 1) return;
              if (tracing) path.back().note = "fetch " + v.name;
              hole->kind = GNode::Kind::VarLeaf;
              hole->name = v.name;
              GNode* opened = fresh_node();
              use_arena.push_back(GUse{opened, ctx, inst, time});
              GUse* use = &use_arena.back();
              inst->uses.push_back(use);
              walk(inst->term, inst->env, stack, opened, weight, left - 1, use, time + 1);
              inst->uses.pop_back();
              use_arena.pop_back();
              hole->kind = GNode::Kind::Hole;
              hole->name.clear();
            },
            [&](const AlgTerm::Abs& a) {
              if (stack.empty() || left < 2) return;
              std::string bound = a.var;
              AlgPtr body = a.body;
              if (g_lookup(env, a.var)) {
                std::set<std::string> avoid = g_domain(env);
                collect_names(a.body, avoid);
                bound = fresh_name(a.var, avoid);
                body = subst(a.body, a.var, mk_var(bound));
              }
              if (tracing) path.back().note = "bind " + bound;
              hole->kind = GNode::Kind::Abs;
              hole->name = bound;
              hole->child = fresh_node();
              std::vector<GInst*> rest(stack.begin(), stack.end() - 1);
              walk(body, g_bind(env, bound, stack.back()), rest, hole->child, weight, left - 2,
                   ctx, time + 1);
              hole->kind = GNode::Kind::Hole;
              hole->name.clear();
              hole->child = nullptr;
            },
            [&](const AlgTerm::App& ap) {
              if (left < 1) return;
              if (tracing) path.back().note = "push argument";
              inst_arena.push_back(GInst{ap.arg, env, time, {}});
              GInst* inst = &inst_arena.back();
              hole->kind = GNode::Kind::App;
              hole->child = fresh_node();
              hole->source = inst;
              std::vector<GInst*> pushed = stack;
              pushed.push_back(inst);
              walk(ap.fun, env, pushed, hole->child, weight, left - 1, ctx, time + 1);
              hole->kind = GNode::Kind::Hole;
              hole->child = nullptr;
              hole->source = nullptr;
            },
        },
        control->node);
    if (tracing) path.pop_back();
  }

  ResPtr materialize(const GNode* node) const {
    switch (node->kind) {
      case GNode::Kind::VarLeaf:
        return mk_rvar(node->name);
      case GNode::Kind::C0Leaf:
        return mk_rc0();
      case GNode::Kind::Abs:
        return mk_rabs(node->name, materialize(node->child));
      case GNode::Kind::App: {
        Bag bag;
        for (const GUse* use : node->source->uses) bag.insert(materialize(use->root));
        return mk_rapp(materialize(node->child), bag);
      }
      case GNode::Kind::Hole:
        break;
    }
    throw std::logic_error("annotation with an unfilled position");
  }

  void accept(const Scalar& weight) {
    if (out) out->insert_add(materialize(root), weight);
    if (target && alpha_eq(materialize(root), *target)) {
      found = true;
      render_rows();
    }
  }

  // ---------- trace rendering; runs while the built tree is intact ----------

  AlgEnv conv_env(const GEnv& env) {
    if (!env) return nullptr;
    auto it = env_memo.find(env.get());
    if (it != env_memo.end()) return it->second;
    AlgEnvNode node;
    for (const auto& [name, inst] : env->bindings)
      node.bindings.emplace(name, AlgClosure{inst->term, conv_env(inst->env)});
    AlgEnv made = std::make_shared<const AlgEnvNode>(std::move(node));
    env_memo.emplace(env.get(), made);
    return made;
  }

  // Whether the dereference `use` draws on the environment entry rendered at
  // row `when` under context `ctx`: its chain of carriers must lead to `ctx`,
  // and neither its own dereference nor the push that carried it away from
  // this environment may already have happened.
  static bool charged(const GUse* use, const GUse* ctx, std::size_t when) {
    if (use->parent == ctx) return use->time >= when;
    const GUse* above = use->parent ? use->parent->parent : nullptr;
    if (!use->parent) return false;
    while (above != ctx && above) above = above->parent;
    if (above != ctx) return false;
    return use->parent->owner->push_time >= when;
  }

  ResClosure closure_view(const GInst* inst, const std::function<bool(const GUse*)>& member) {
    Bag bag;
    for (const GUse* use : inst->uses)
      if (member(use)) bag.insert(materialize(use->root));
    ResEnv env;
    if (inst->env)
      for (const auto& [name, sub] : inst->env->bindings) {
        auto inside = [&](const GUse* w) {
          const GUse* a = w->parent;
          while (a && a->owner != inst) a = a->parent;
          return a != nullptr && member(a);
        };
        ResClosure nested = closure_view(sub, inside);
        if (!closure_is_unit(nested)) env = res_env_bind(env, name, std::move(nested));
      }
    return ResClosure{std::move(bag), env};
  }

  void render_rows() {
    for (std::size_t when = 0; when < path.size(); ++when) {
      const StepRecord& rec = path[when];
      PairedConfig pc{AlgState{rec.control, conv_env(rec.env), {}},
                      ResConfig{Bag{}, nullptr, {}}};
      for (GInst* inst : rec.stack) {
        pc.alg.stack.push_back(AlgClosure{inst->term, conv_env(inst->env)});
        pc.res.stack.push_back(closure_view(inst, [](const GUse*) { return true; }));
      }
      pc.res.control.insert(materialize(rec.hole));
      if (rec.env)
        for (const auto& [name, inst] : rec.env->bindings) {
          ResClosure view =
              closure_view(inst, [&](const GUse* u) { return charged(u, rec.ctx, when); });
          if (!closure_is_unit(view)) pc.res.env = res_env_bind(pc.res.env, name, std::move(view));
        }
      Scalar value = coefficient(pc, sr, trace_opts);
      rows.push_back(TraceRow{std::move(pc), std::move(value), rec.note});
    }
  }
};

}  // namespace

Combination enumerate_support(const AlgPtr& term, std::size_t max_size, const Semiring& sr) {
  if (!free_vars(term).empty()) throw NotClosed("machine support needs a closed term");
  Combination out;
  Walker walker{sr, max_size};
  walker.out = &out;
  walker.run(term);
  return out;
}

std::vector<TraceRow> trace_pair(const AlgPtr& term, const ResPtr& t, const Semiring& sr,
                                 const QkamOptions& opts) {
  if (!free_vars(term).empty()) throw NotClosed("machine traces need a closed term");
  Walker walker{sr, term_size(t)};
  walker.target = &t;
  walker.trace_opts = opts;
  walker.run(term);
  return std::move(walker.rows);
}

}  // namespace alkam

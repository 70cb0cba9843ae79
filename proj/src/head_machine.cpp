#include "alkam/head_machine.hpp"

#include <utility>

namespace alkam {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

AlgEnv env_bind(const AlgEnv& env, const std::string& name, AlgClosure closure) {
  AlgEnvNode node;
  if (env) node.bindings = env->bindings;
  node.bindings.insert_or_assign(name, std::move(closure));
  return std::make_shared<const AlgEnvNode>(std::move(node));
}

const AlgClosure* env_lookup(const AlgEnv& env, const std::string& name) {
  if (!env) return nullptr;
  auto it = env->bindings.find(name);
  return it == env->bindings.end() ? nullptr : &it->second;
}

std::set<std::string> env_domain(const AlgEnv& env) {
  std::set<std::string> out;
  if (env)
    for (const auto& [name, c] : env->bindings) out.insert(name);
  return out;
}

AlgState initial_state(const AlgPtr& term) { return AlgState{term, nullptr, {}}; }

MachineStep machine_step(const AlgState& state, const Semiring& sr) {
  return std::visit(
      overloaded{
          [&](const AlgTerm::C0&) -> MachineStep {
            if (state.stack.empty()) return {StepKind::Accept, {}, {}, "constant"};
            return {StepKind::Stuck, {}, {}, "constant applied to arguments"};
          },
          [&](const AlgTerm::Var& v) -> MachineStep {
            const AlgClosure* c = env_lookup(state.env, v.name);
            if (!c) return {StepKind::Stuck, {}, {}, "unbound variable " + v.name};
            return {StepKind::Next, AlgState{c->term, c->env, state.stack}, {},
                    "fetch " + v.name};
          },
          [&](const AlgTerm::Abs& a) -> MachineStep {
            if (state.stack.empty())
              return {StepKind::Stuck, {}, {}, "abstraction with an empty stack"};
            AlgState next{a.body, state.env, state.stack};
            AlgClosure top = std::move(next.stack.back());
            next.stack.pop_back();
            std::string bound = a.var;
            if (env_lookup(state.env, a.var)) {
              std::set<std::string> avoid = env_domain(state.env);
              collect_names(a.body, avoid);
              bound = fresh_name(a.var, avoid);
              next.term = subst(a.body, a.var, mk_var(bound));
            }
            next.env = env_bind(state.env, bound, std::move(top));
            return {StepKind::Next, std::move(next), {}, "bind " + bound};
          },
          [&](const AlgTerm::App& a) -> MachineStep {
            AlgState next{a.fun, state.env, state.stack};
            next.stack.push_back(AlgClosure{a.arg, state.env});
            return {StepKind::Next, std::move(next), {}, "push argument"};
          },
          [&](const AlgTerm::Scale& s) -> MachineStep {
            MachineStep step{StepKind::Branch, {}, {}, "scale"};
            step.branches.emplace_back(s.factor, AlgState{s.term, state.env, state.stack});
            return step;
          },
          [&](const AlgTerm::Sum& s) -> MachineStep {
            MachineStep step{StepKind::Branch, {}, {}, "sum"};
            step.branches.emplace_back(sr.one(), AlgState{s.lhs, state.env, state.stack});
            step.branches.emplace_back(sr.one(), AlgState{s.rhs, state.env, state.stack});
            return step;
          },
          [&](const AlgTerm::Zero&) -> MachineStep {
            return {StepKind::Branch, {}, {}, "zero"};
          },
      },
      state.term->node);
}

Scalar run_K(const AlgState& state, const Nat& fuel, const Semiring& sr) {
  AlgState current = state;
  Nat left = fuel;
  while (true) {
    if (left == 0) return sr.zero();
    MachineStep step = machine_step(current, sr);
    switch (step.kind) {
      case StepKind::Accept:
        return sr.one();
      case StepKind::Stuck:
        return sr.zero();
      case StepKind::Next:
        current = std::move(step.next);
        --left;
        break;
      case StepKind::Branch: {
        Scalar acc = sr.zero();
        for (const auto& [weight, succ] : step.branches)
          acc = add(acc, mul(weight, run_K(succ, left, sr)));
        return acc;
      }
    }
  }
}

Scalar run_K(const AlgPtr& term, const Nat& fuel, const Semiring& sr) {
  return run_K(initial_state(term), fuel, sr);
}

std::vector<AlgState> trace_K(const AlgPtr& term, const Nat& fuel, const Semiring& sr) {
  std::vector<AlgState> rows;
  rows.push_back(initial_state(term));
  Nat left = fuel;
  while (left > 0) {
    MachineStep step = machine_step(rows.back(), sr);
    if (step.kind == StepKind::Next) {
      rows.push_back(std::move(step.next));
      --left;
      continue;
    }
    if (step.kind == StepKind::Branch && step.branches.size() == 1) {
      rows.push_back(std::move(step.branches.front().second));
      continue;
    }
    break;
  }
  return rows;
}

// ------------------------------- readback -------------------------------

namespace {

AlgPtr readback_term(const AlgPtr& t, const AlgEnv& env, std::set<std::string>& bound) {
  return std::visit(
      overloaded{
          [&](const AlgTerm::Var& v) -> AlgPtr {
            if (bound.count(v.name)) return t;
            if (const AlgClosure* c = env_lookup(env, v.name)) return readback(*c);
            throw NotClosed("unbound variable " + v.name);
          },
          [&](const AlgTerm::C0&) { return t; },
          [&](const AlgTerm::Zero&) { return t; },
          [&](const AlgTerm::Abs& a) -> AlgPtr {
            const bool fresh = bound.insert(a.var).second;
            AlgPtr body = readback_term(a.body, env, bound);
            if (fresh) bound.erase(a.var);
            return mk_abs(a.var, std::move(body));
          },
          [&](const AlgTerm::App& a) -> AlgPtr {
            return mk_app(readback_term(a.fun, env, bound), readback_term(a.arg, env, bound));
          },
          [&](const AlgTerm::Scale& s) -> AlgPtr {
            return mk_scale(s.factor, readback_term(s.term, env, bound));
          },
          [&](const AlgTerm::Sum& s) -> AlgPtr {
            return mk_sum(readback_term(s.lhs, env, bound), readback_term(s.rhs, env, bound));
          },
      },
      t->node);
}

}  // namespace

AlgPtr readback(const AlgClosure& closure) {
  std::set<std::string> bound;
  return readback_term(closure.term, closure.env, bound);
}

AlgPtr readback(const AlgState& state) {
  AlgPtr acc = readback(AlgClosure{state.term, state.env});
  for (auto it = state.stack.rbegin(); it != state.stack.rend(); ++it)
    acc = mk_app(std::move(acc), readback(*it));
  return acc;
}

// ------------------------------- equality -------------------------------

bool closure_eq(const AlgClosure& a, const AlgClosure& b) {
  return alpha_eq(a.term, b.term) && env_eq(a.env, b.env);
}

bool env_eq(const AlgEnv& a, const AlgEnv& b) {
  const std::size_t na = a ? a->bindings.size() : 0;
  const std::size_t nb = b ? b->bindings.size() : 0;
  if (na != nb) return false;
  if (na == 0) return true;
  auto ib = b->bindings.begin();
  for (const auto& [name, c] : a->bindings) {
    if (name != ib->first || !closure_eq(c, ib->second)) return false;
    ++ib;
  }
  return true;
}

bool state_eq(const AlgState& a, const AlgState& b) {
  if (!alpha_eq(a.term, b.term) || !env_eq(a.env, b.env)) return false;
  if (a.stack.size() != b.stack.size()) return false;
  for (std::size_t i = 0; i < a.stack.size(); ++i)
    if (!closure_eq(a.stack[i], b.stack[i])) return false;
  return true;
}

// ------------------------------- rendering -------------------------------

std::string to_string(const AlgClosure& c) {
  return "(" + to_string(c.term) + ", " + to_string(c.env) + ")";
}

std::string to_string(const AlgEnv& env) {
  if (!env || env->bindings.empty()) return "{}";
  std::string out = "{";
  bool first = true;
  for (const auto& [name, c] : env->bindings) {
    if (!first) out += ", ";
    first = false;
    out += name + " -> " + to_string(c);
  }
  return out + "}";
}

std::string to_string(const AlgState& state) {
  std::string out = to_string(state.term) + " | " + to_string(state.env) + " | [";
  for (auto it = state.stack.rbegin(); it != state.stack.rend(); ++it) {
    if (it != state.stack.rbegin()) out += "; ";
    out += to_string(*it);
  }
  return out + "]";
}

}  // namespace alkam

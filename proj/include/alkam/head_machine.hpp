#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "alkam/lambda_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam {

struct AlgEnvNode;

/// Persistent environment; the null pointer is the empty environment.
using AlgEnv = std::shared_ptr<const AlgEnvNode>;

struct AlgClosure {
  AlgPtr term;
  AlgEnv env;
};

struct AlgEnvNode {
  std::map<std::string, AlgClosure> bindings;
};

AlgEnv env_bind(const AlgEnv& env, const std::string& name, AlgClosure closure);
const AlgClosure* env_lookup(const AlgEnv& env, const std::string& name);
std::set<std::string> env_domain(const AlgEnv& env);

/// Machine state: control term, environment, and the argument stack with its
/// top at the back.
struct AlgState {
  AlgPtr term;
  AlgEnv env;
  std::vector<AlgClosure> stack;
};

AlgState initial_state(const AlgPtr& term);

enum class StepKind {
  Accept,  // the constant with an empty stack: value one
  Stuck,   // unbound variable, abstraction/empty stack, constant/arguments
  Next,    // a structural transition; costs one unit of fuel
  Branch,  // weighted successors of a sum, scale, or zero control; free
};

struct MachineStep {
  StepKind kind = StepKind::Stuck;
  AlgState next;                                      // kind == Next
  std::vector<std::pair<Scalar, AlgState>> branches;  // kind == Branch
  std::string note;                                   // transition label
};

MachineStep machine_step(const AlgState& state, const Semiring& sr);

/// Value of the fuel-bounded head run: the coefficient the machine attaches
/// to the constant when it reaches it within the budget of structural steps
/// (reaching it spends one final unit), and zero otherwise — out of fuel,
/// stuck, or unbound. Sums branch, scales multiply, and neither spends fuel.
Scalar run_K(const AlgPtr& term, const Nat& fuel, const Semiring& sr);
Scalar run_K(const AlgState& state, const Nat& fuel, const Semiring& sr);

/// States along the deterministic spine: follows structural transitions and
/// single-successor scale branches, and stops at an accept, a stuck state, a
/// sum or zero control, or fuel exhaustion. Includes the starting state.
std::vector<AlgState> trace_K(const AlgPtr& term, const Nat& fuel, const Semiring& sr);

/// The algebraic term a state denotes: environment substituted away and the
/// stack applied back, left to right from the top. Throws NotClosed when an
/// unbound variable remains.
AlgPtr readback(const AlgClosure& closure);
AlgPtr readback(const AlgState& state);

bool closure_eq(const AlgClosure&, const AlgClosure&);
bool env_eq(const AlgEnv&, const AlgEnv&);
bool state_eq(const AlgState&, const AlgState&);

std::string to_string(const AlgClosure&);
std::string to_string(const AlgEnv&);
std::string to_string(const AlgState&);

}  // namespace alkam

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "alkam/head_machine.hpp"
#include "alkam/lambda_syntax.hpp"
#include "alkam/resource_syntax.hpp"
#include "alkam/scalar.hpp"

namespace alkam {

struct ResEnvNode;

/// Persistent resource environment; the null pointer is the empty one.
/// Entries hold only non-unit closures: an absent name means the unit.
using ResEnv = std::shared_ptr<const ResEnvNode>;

/// A bag of resource terms together with the environment its variables draw
/// from; the unit closure is the empty bag under the empty environment.
struct ResClosure {
  Bag bag;
  ResEnv env;
};

struct ResEnvNode {
  std::map<std::string, ResClosure> bindings;
};

bool res_env_empty(const ResEnv&);
bool closure_is_unit(const ResClosure&);
ResEnv res_env_bind(const ResEnv&, const std::string&, ResClosure);  // drops units
const ResClosure* res_env_lookup(const ResEnv&, const std::string&);
std::set<std::string> res_env_domain(const ResEnv&);

ResClosure closure_concat(const ResClosure&, const ResClosure&);
ResEnv res_env_concat(const ResEnv&, const ResEnv&);

/// All ordered pairs concatenating back to the input: bag decompositions
/// crossed with environment decompositions, recursively. With `prune`,
/// pairs where either piece pairs an empty bag with a non-empty environment
/// are dropped; such pieces can only ever contribute zero.
std::vector<std::pair<ResClosure, ResClosure>> closure_splittings(const ResClosure&,
                                                                  bool prune = false);
std::vector<std::pair<ResEnv, ResEnv>> env_splittings(const ResEnv&, bool prune = false);

/// Resource half of a paired configuration: a bag in control position, an
/// environment, and a stack of closures with its top at the back. The
/// stacks of the two halves always have equal depth.
struct ResConfig {
  Bag control;
  ResEnv env;
  std::vector<ResClosure> stack;
};

struct PairedConfig {
  AlgState alg;
  ResConfig res;
};

struct QkamOptions {
  bool prune = true;           // drop splittings that can only contribute zero
  bool check_measure = false;  // assert the termination measure decreases
};

std::size_t res_size(const ResClosure&);
std::size_t res_size(const ResEnv&);
std::size_t res_size(const ResConfig&);

/// Lexicographic termination measure: every rule strictly shrinks the
/// resource size, except the scalar rules, which keep it and shrink the
/// algebraic control instead.
std::pair<std::size_t, std::size_t> config_measure(const PairedConfig&);

/// The scalar the paired machine assigns to a configuration.
Scalar coefficient(const PairedConfig&, const Semiring& sr, const QkamOptions& = {});

/// Machine coefficient of the simple term `t` for the closed term `term`:
/// the value of the paired run started on (term, t). Throws NotClosed.
Scalar k_hat(const AlgPtr& term, const ResPtr& t, const Semiring& sr, const QkamOptions& = {});

/// Every simple term of size at most `max_size` with a nonzero machine
/// coefficient, found by running the machine forward and building the
/// annotations it can consume. Throws NotClosed.
Combination enumerate_support(const AlgPtr& term, std::size_t max_size, const Semiring& sr);

/// One row per visited configuration of the accepting run that builds `t`,
/// with the scalar of each rendered pair recomputed from scratch.
struct TraceRow {
  PairedConfig config;
  Scalar value;
  std::string note;
};

/// Rows of the machine run whose annotation is `t` (up to alpha); empty when
/// no accepting run builds it. Throws NotClosed.
std::vector<TraceRow> trace_pair(const AlgPtr& term, const ResPtr& t, const Semiring& sr,
                                 const QkamOptions& = {});

std::string to_string(const ResClosure&);
std::string to_string(const ResEnv&);
std::string to_string(const ResConfig&);

}  // namespace alkam

#pragma once

#include <string>
#include <vector>

#include "persuasion/model.hpp"

namespace persuasion::fixtures {

/// One random-order vector GB=(0,1), BG=(1,0), BB=(0,0) over three actions.
json intro();

/// Two independent actions: a deterministic (rho 0, xi 1) one and a coin
/// between (1, 0) and (0, 0). The relaxation bound is 0 while OPT is 1/2.
json sec43();

/// k identical independent actions, (1,1) w.p. 1/k and (0,0) otherwise.
json footnote_iid(int k);

/// IID over n actions: (1,1) w.p. 1/n, (0,0) otherwise.
json ratio_iid(int n);

/// One random-order vector with a single (1,1) among n-1 copies of (0,0).
json tight_random_order(int n);

/// Name -> document for every shipped fixture file.
std::vector<std::pair<std::string, json>> shipped();

}  // namespace persuasion::fixtures

#pragma once

#include <string>
#include <vector>

#include "chu3/ortho.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

// A replayed counterexample: a fixed claim, the byte-stable witness that
// establishes it, and whether this run reproduced it.
struct Certificate {
    std::string id;
    std::string statement;
    std::string witness;
    bool reproduced = false;

    std::string render() const;
};

// The closure order on tensor(f3,f3) is strictly finer than the evaluation
// order: the diagonal triple sits below the bottom pure tensor in the
// evaluation order but not in the closure order.
Certificate certify_f3_diagonal(const StateSpace& f3);

// tensor(s4,s4) is not orthocomplemented: the star of [[a1,a1]] is forced
// onto the meet of [[bot,a1s]] and [[a1s,bot]], yet that element and the
// meet of [[a1,a1]] and [[a2,a2]] have no common upper bound.
Certificate certify_basic_tensor_join_gap(const StateSpace& s4);

// star_tensor(s4,s4) fails orthocomplementation with a two-generator
// witness, while star_tensor(f2,s4) is orthocomplemented.
Certificate certify_star_tensor_orthocomplement(const StateSpace& s4,
                                                const StarMap& s4_star,
                                                const StateSpace& f2,
                                                const StarMap& f2_star);

struct CounterexampleReport {
    std::vector<Certificate> certificates;

    bool all_reproduced() const {
        for (const Certificate& c : certificates) {
            if (!c.reproduced) return false;
        }
        return !certificates.empty();
    }
};

// Loads the needed fixtures (f3.json, s4.json, f2.json) from the directory
// and replays the counterexamples. `only` picks one by id ("f3",
// "s4-basic", "s4-star"); empty runs all three. Unknown ids raise
// ParseError, as do unreadable or malformed fixtures.
CounterexampleReport run_counterexamples(const std::string& fixtures_dir,
                                         const std::string& only = "");

} // namespace chu3

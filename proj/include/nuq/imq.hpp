#pragma once

#include "nuq/linkdiag.hpp"
#include "nuq/numodule.hpp"
#include "nuq/qa.hpp"
#include "nuq/quandle.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nuq {

struct ImqCaps {
    std::size_t max_elements = 0;  // 0 = max(64 * mu * det / 2, 10000)
    std::size_t max_steps = 20000000;
    std::optional<std::uint64_t> shuffle_seed;  // perturbs deduction order
};

struct InfiniteQuandle : std::runtime_error {
    InfiniteQuandle() : std::runtime_error("infinite quandle") {}
};

struct ResourceCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ImqResult {
    FiniteQuandle quandle;
    std::vector<int> arc_element;  // arc -> element
    std::size_t steps = 0;
    std::size_t peak_elements = 0;
};

// Throws InfiniteQuandle when det = 0 and ResourceCap when a cap trips.
ImqResult compute_imq(const LinkDiagram& d, ImqCaps caps = {});
ImqResult compute_imq(const LinkDiagram& d, const Int& det, ImqCaps caps = {});

// q_a -> element of Q_A holding sD(a), extended to all of IMQ. Throws InternalError on failure.
std::vector<int> imq_surjection_to_qa(const ImqResult& imq, const LinkDiagram& d, const QaQuandle& qa,
                                      const NuModule& m);

bool check_main3(const Int& imq_size, const Int& det, int mu);
// Every orbit has at most |det|/2 elements; requires mu >= 2.
bool check_orbit_bound(const FiniteQuandle& imq, const Int& det, int mu);

// d must be even and imq computed from d.
bool longitude_fixes_orbit(const LinkDiagram& d, const ImqResult& imq);

}  // namespace nuq

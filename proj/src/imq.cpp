#include "nuq/imq.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace nuq {

namespace {

// Union-find plus a dense partial operation table. Stored entries always sit at representative
// row/column indices; values may be stale and are resolved through find().
class ImqState {
public:
    ImqState(std::size_t max_elements, std::size_t max_steps, std::optional<std::uint64_t> seed)
        : max_elements_(max_elements), max_steps_(max_steps) {
        if (seed) rng_.emplace(*seed);
    }

    int create() {
        int id = static_cast<int>(parent_.size());
        if (live_ + 1 > max_elements_) throw ResourceCap("resource cap: element limit reached");
        parent_.push_back(id);
        ++live_;
        peak_ = std::max(peak_, live_);
        if (static_cast<std::size_t>(id) >= dim_) grow();
        reps_dirty_ = true;
        define(id, id, id);
        return id;
    }

    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    int get(int x, int y) {
        int v = tab_[idx(find(x), find(y))];
        return v < 0 ? -1 : find(v);
    }

    // x |> y = z, together with z |> y = x
    void define(int x, int y, int z) {
        x = find(x);
        y = find(y);
        z = find(z);
        set_entry(x, y, z);
        set_entry(z, y, x);
    }

    void merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) pending_.emplace_back(a, b);
    }

    // Saturates until the table is total and closed.
    void saturate() {
        for (;;) {
            drain();
            if (define_next()) continue;
            if (!full_scan()) return;
        }
    }

    std::vector<int> reps() {
        if (reps_dirty_) {
            reps_.clear();
            for (int i = 0; i < static_cast<int>(parent_.size()); ++i)
                if (parent_[i] == i) reps_.push_back(i);
            reps_dirty_ = false;
        }
        return reps_;
    }

    std::size_t steps() const { return steps_; }
    std::size_t peak() const { return peak_; }

private:
    std::size_t max_elements_, max_steps_;
    std::optional<std::mt19937_64> rng_;
    std::vector<int> parent_;
    std::size_t live_ = 0, peak_ = 0, steps_ = 0;
    std::size_t dim_ = 0;
    std::vector<int> tab_;
    std::deque<std::pair<int, int>> queue_;
    std::vector<std::pair<int, int>> pending_;
    std::vector<int> reps_;
    bool reps_dirty_ = true;

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(x) * dim_ + y; }

    void grow() {
        std::size_t nd = std::max<std::size_t>(16, dim_ * 2);
        std::vector<int> nt(nd * nd, -1);
        for (std::size_t x = 0; x < dim_; ++x)
            std::copy(tab_.begin() + x * dim_, tab_.begin() + (x + 1) * dim_, nt.begin() + x * nd);
        tab_ = std::move(nt);
        dim_ = nd;
    }

    void push(int x, int y) {
        if (rng_ && ((*rng_)() & 1))
            queue_.emplace_front(x, y);
        else
            queue_.emplace_back(x, y);
    }

    void set_entry(int x, int y, int z) {
        int& e = tab_[idx(x, y)];
        if (e >= 0) {
            int v = find(e);
            if (v != z) pending_.emplace_back(v, z);
            return;
        }
        e = z;
        push(x, y);
    }

    void tick() {
        if (++steps_ > max_steps_) throw ResourceCap("resource cap: step limit reached");
    }

    void process_merges() {
        while (!pending_.empty()) {
            auto [a, b] = pending_.back();
            pending_.pop_back();
            a = find(a);
            b = find(b);
            if (a == b) continue;
            int keep = std::min(a, b), drop = std::max(a, b);
            parent_[drop] = keep;
            --live_;
            reps_dirty_ = true;
            int n = static_cast<int>(parent_.size());
            for (int y = 0; y < n; ++y) {
                int& e = tab_[idx(drop, y)];
                if (e < 0) continue;
                int v = e;
                e = -1;
                int fy = find(y);
                set_entry(keep, fy, find(v));
            }
            for (int x = 0; x < n; ++x) {
                int& e = tab_[idx(x, drop)];
                if (e < 0) continue;
                int v = e;
                e = -1;
                set_entry(find(x), keep, find(v));
            }
            // entries whose value changed class need another look
            std::vector<int> R = reps();
            for (int x : R)
                for (int y : R) {
                    int e = tab_[idx(x, y)];
                    if (e >= 0 && (find(e) == keep || x == keep || y == keep)) push(x, y);
                }
        }
    }

    // Checks one equation L1 |> L2 = R1 |> R2 where any operand may be unknown (-1).
    void equate(int l1, int l2, int r1, int r2) {
        tick();
        int lv = (l1 >= 0 && l2 >= 0) ? get(l1, l2) : -1;
        int rv = (r1 >= 0 && r2 >= 0) ? get(r1, r2) : -1;
        if (lv >= 0 && rv >= 0) {
            if (lv != rv) merge(lv, rv);
        } else if (lv >= 0 && r1 >= 0 && r2 >= 0) {
            define(r1, r2, lv);
        } else if (rv >= 0 && l1 >= 0 && l2 >= 0) {
            define(l1, l2, rv);
        }
    }

    void distributive(int a, int b, int c) {
        equate(get(a, b), c, get(a, c), get(b, c));
    }

    void medial(int w, int x, int y, int z) {
        equate(get(w, x), get(y, z), get(w, y), get(x, z));
    }

    void deduce(int p, int q) {
        p = find(p);
        q = find(q);
        if (get(p, q) < 0) return;
        std::vector<int> R = reps();
        // right distributivity (a|>b)|>c = (a|>c)|>(b|>c)
        for (int c : R) distributive(p, q, c);          // a|>b
        for (int b : R) {                               // (a|>b)|>c with a|>b = p
            int a = get(p, b);
            if (a >= 0) distributive(a, b, q);
        }
        for (int b : R) distributive(p, b, q);          // a|>c
        for (int a : R) distributive(a, p, q);          // b|>c
        for (int c : R) {                               // (a|>c)|>(b|>c)
            int a = get(p, c), b = get(q, c);
            if (a >= 0 && b >= 0) distributive(a, b, c);
        }
        // mediality (w|>x)|>(y|>z) = (w|>y)|>(x|>z)
        for (int u : R)
            for (int v : R) {
                medial(p, q, u, v);  // w|>x
                medial(u, v, p, q);  // y|>z
                medial(p, u, q, v);  // w|>y
                medial(u, p, v, q);  // x|>z
            }
        for (int x : R) {
            int w = get(p, x);
            if (w < 0) continue;
            for (int z : R) {
                int y = get(q, z);
                if (y >= 0) medial(w, x, y, z);  // outer left
            }
        }
        for (int y : R) {
            int w = get(p, y);
            if (w < 0) continue;
            for (int z : R) {
                int x = get(q, z);
                if (x >= 0) medial(w, x, y, z);  // outer right
            }
        }
    }

    void drain() {
        for (;;) {
            process_merges();
            if (queue_.empty()) return;
            auto [x, y] = queue_.front();
            queue_.pop_front();
            deduce(x, y);
        }
    }

    // Defines the first undefined product, ordered by the later creation position of its operands.
    bool define_next() {
        std::vector<int> R = reps();
        for (std::size_t k = 0; k < R.size(); ++k) {
            for (std::size_t i = 0; i <= k; ++i) {
                for (auto [x, y] : {std::pair{R[i], R[k]}, std::pair{R[k], R[i]}}) {
                    if (tab_[idx(x, y)] >= 0) continue;
                    int z = create();
                    define(x, y, z);
                    return true;
                }
            }
        }
        return false;
    }

    // Exhaustive axiom check on the total table; queues merges for any failure.
    bool full_scan() {
        std::vector<int> R = reps();
        bool found = false;
        for (int x : R)
            for (int y : R) {
                int z = get(x, y);
                if (get(z, y) != x) {
                    merge(get(z, y), x);
                    found = true;
                }
            }
        for (int a : R)
            for (int b : R)
                for (int c : R) {
                    tick();
                    int l = get(get(a, b), c), r = get(get(a, c), get(b, c));
                    if (l != r) {
                        merge(l, r);
                        found = true;
                    }
                }
        for (int w : R)
            for (int x : R) {
                int wx = get(w, x);
                for (int y : R) {
                    int wy = get(w, y);
                    for (int z : R) {
                        tick();
                        int l = get(wx, get(y, z)), r = get(wy, get(x, z));
                        if (l != r) {
                            merge(l, r);
                            found = true;
                        }
                    }
                }
            }
        return found;
    }
};

}  // namespace

ImqResult compute_imq(const LinkDiagram& d, ImqCaps caps) {
    return compute_imq(d, det_link(build_nu_module(d)), caps);
}

ImqResult compute_imq(const LinkDiagram& d, const Int& det, ImqCaps caps) {
    if (det == 0) throw InfiniteQuandle();
    if (caps.max_elements == 0) {
        Int bound = Int(d.mu()) * det / 2;
        if (bound < 1) bound = 1;
        Int c = 64 * bound;
        caps.max_elements = c > 10000 ? c.get_ui() : 10000;
    }
    ImqState st(caps.max_elements, caps.max_steps, caps.shuffle_seed);
    std::vector<int> gen(d.n_arcs);
    for (int a = 0; a < d.n_arcs; ++a) gen[a] = st.create();
    std::vector<std::size_t> order(d.crossings.size());
    std::iota(order.begin(), order.end(), 0);
    if (caps.shuffle_seed) std::shuffle(order.begin(), order.end(), std::mt19937_64(*caps.shuffle_seed));
    for (std::size_t j : order) {
        const Crossing& c = d.crossings[j];
        st.define(gen[c.under[0]], gen[c.over], gen[c.under[1]]);
    }
    st.saturate();

    std::vector<int> R = st.reps();
    std::vector<int> pos(R.empty() ? 0 : R.back() + 1, -1);
    for (std::size_t i = 0; i < R.size(); ++i) pos[R[i]] = static_cast<int>(i);
    ImqResult res;
    int n = static_cast<int>(R.size());
    res.quandle = FiniteQuandle(n);
    res.quandle.labels.assign(n, "");
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) res.quandle.at(x, y) = pos[st.get(R[x], R[y])];
    for (int a = 0; a < d.n_arcs; ++a) {
        int e = pos[st.find(gen[a])];
        res.arc_element.push_back(e);
        std::string& l = res.quandle.labels[e];
        l += (l.empty() ? "" : "=") + d.arc_names[a];
    }
    for (int x = 0; x < n; ++x)
        if (res.quandle.labels[x].empty()) res.quandle.labels[x] = "e" + std::to_string(x);
    res.steps = st.steps();
    res.peak_elements = st.peak();

    if (!check_axioms(res.quandle, 1).empty()) throw InternalError("saturated table fails the axioms");
    for (const Crossing& c : d.crossings)
        if (res.quandle(res.arc_element[c.under[0]], res.arc_element[c.over]) != res.arc_element[c.under[1]])
            throw InternalError("saturated table violates a crossing relation");
    return res;
}

std::vector<int> imq_surjection_to_qa(const ImqResult& imq, const LinkDiagram& d, const QaQuandle& qa,
                                      const NuModule& m) {
    const FiniteQuandle& q = imq.quandle;
    std::vector<int> f(q.n, -1);
    std::vector<int> done;
    auto qa_index = [&](const GroupElt& x) {
        auto it = std::find(qa.element_map.begin(), qa.element_map.end(), x);
        if (it == qa.element_map.end()) throw InternalError("sD(a) is not an element of Q_A");
        return static_cast<int>(it - qa.element_map.begin());
    };
    std::vector<int> queue;
    for (int a = 0; a < d.n_arcs; ++a) {
        int e = imq.arc_element[a];
        int t = qa_index(m.sD[a]);
        if (f[e] >= 0 && f[e] != t) throw InternalError("arc images disagree on a merged IMQ element");
        if (f[e] < 0) {
            f[e] = t;
            queue.push_back(e);
        }
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
        int u = queue[i];
        for (std::size_t j = 0; j <= i; ++j) {
            int v = queue[j];
            for (auto [x, y] : {std::pair{u, v}, std::pair{v, u}}) {
                int z = q(x, y);
                int img = qa.quandle(f[x], f[y]);
                if (f[z] < 0) {
                    f[z] = img;
                    queue.push_back(z);
                } else if (f[z] != img) {
                    throw InternalError("IMQ -> Q_A map is not well defined");
                }
            }
        }
    }
    if (static_cast<int>(queue.size()) != q.n) throw InternalError("arc generators do not generate IMQ");
    if (!is_homomorphism(q, qa.quandle, f)) throw InternalError("IMQ -> Q_A map is not a homomorphism");
    std::vector<char> hit(qa.quandle.n, 0);
    for (int v : f) hit[v] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) throw InternalError("IMQ -> Q_A map is not onto");
    std::vector<int> orb = orbits(q);
    for (int x = 0; x < q.n; ++x) {
        // orbit of an element follows the component of any arc generator in it
        for (int a = 0; a < d.n_arcs; ++a)
            if (orb[imq.arc_element[a]] == orb[x] && qa.element_component[f[x]] != d.kappa[a])
                throw InternalError("IMQ orbit maps to the wrong Q_A orbit");
    }
    return f;
}

bool check_main3(const Int& imq_size, const Int& det, int mu) {
    if (det == 0) return false;
    Int ad = abs(det);
    if (mu == 1) return imq_size == ad;
    Int upper = Int(mu) * ad / 2;
    Int two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, mu - 1);
    // lower bound mu*det/2^(mu-1), compared without rounding
    return imq_size <= upper && imq_size * two_pow >= Int(mu) * ad;
}

bool check_orbit_bound(const FiniteQuandle& imq, const Int& det, int mu) {
    if (mu < 2) throw std::invalid_argument("orbit bound needs at least two components");
    for (const auto& o : orbit_lists(imq))
        if (Int(static_cast<long>(o.size())) * 2 > abs(det)) return false;
    return true;
}

bool longitude_fixes_orbit(const LinkDiagram& d, const ImqResult& imq) {
    if (!is_even(d)) throw std::invalid_argument("diagram not even");
    const FiniteQuandle& q = imq.quandle;
    std::vector<int> orb = orbits(q);
    for (int i = 0; i < d.mu(); ++i) {
        auto walk = component_walk(d, i);
        int target = orb[imq.arc_element[d.components[i].arcs[0]]];
        for (int x = 0; x < q.n; ++x) {
            if (orb[x] != target) continue;
            int y = x;
            for (auto it = walk.rbegin(); it != walk.rend(); ++it) y = q(y, imq.arc_element[it->second]);
            if (y != x) return false;
        }
    }
    return true;
}

}  // namespace nuq

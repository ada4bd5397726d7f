#include "report.hpp"

#include <algorithm>
#include <sstream>

namespace nuqcli {

using namespace nuq;

json int_json(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
}

json group_json(const FgAbGroup& g) {
    json t = json::array();
    for (const auto& d : g.torsion) t.push_back(int_json(d));
    return json{{"free_rank", g.free_rank}, {"torsion", t}, {"text", g.to_string()}};
}

namespace {

// Which of the IMQ size bounds mu|det|/2^(mu-1) and mu|det|/2 the size meets exactly.
std::string bound_attained(const Int& n, const Int& det, int mu) {
    Int ad = abs(det);
    if (mu == 1) return "both";
    Int two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, mu - 1);
    bool lower = n * two_pow == Int(mu) * ad;
    bool upper = n * 2 == Int(mu) * ad;
    if (lower && upper) return "both";
    if (lower) return "lower";
    if (upper) return "upper";
    return "neither";
}

std::vector<std::size_t> sorted_orbit_sizes(const FiniteQuandle& q) {
    std::vector<std::size_t> s;
    for (const auto& o : orbit_lists(q)) s.push_back(o.size());
    std::sort(s.begin(), s.end());
    return s;
}

std::string parity_string(const ParityVec& v) {
    std::string s;
    for (int b : v) s.push_back(b ? '1' : '0');
    return s;
}

std::string join_sizes(const json& arr) {
    std::string s;
    for (const auto& x : arr) {
        if (!s.empty()) s += ",";
        s += x.dump();
    }
    return "{" + s + "}";
}

}  // namespace

json build_report(const Analysis& a) {
    const LinkDiagram& d = a.diagram;
    json r;
    r["mu"] = d.mu();
    r["arcs"] = d.n_arcs;
    r["crossings"] = d.crossings.size();
    r["evenized"] = a.evenized;
    r["det"] = int_json(a.det);
    r["module"] = group_json(a.module.group);
    r["ker_w"] = group_json(a.kerw.group);

    json orders = json::array();
    for (const auto& o : a.lambda_orders) orders.push_back(o ? int_json(*o) : json("infinite"));
    json lon{{"orders", orders}};
    lon["zero_subset"] = a.zero_subset ? json(*a.zero_subset) : json(nullptr);
    r["longitudes"] = lon;

    if (a.qa) {
        r["qa"] = json{{"size", a.qa->quandle.n}, {"orbit_sizes", sorted_orbit_sizes(a.qa->quandle)}};
    } else {
        r["qa"] = "infinite";
    }

    json imq{{"status", imq_status_name(a.imq_status)}};
    if (a.imq) {
        const FiniteQuandle& q = a.imq->quandle;
        imq["size"] = q.n;
        imq["orbit_sizes"] = sorted_orbit_sizes(q);
        imq["semiregular"] = is_semiregular(q);
    }
    r["imq"] = imq;

    r["characteristic_compatibility"] = tri_name(a.charcompat.verdict);
    // multiset of parity vectors of the nonzero torsion elements, as vector -> count
    json prof = json::object();
    for (const auto& v : a.profile) {
        json& c = prof[parity_string(v)];
        c = c.is_null() ? 1 : c.get<int>() + 1;
    }
    r["torsion_parity_profile"] = prof;

    if (a.imq) {
        r["main3"] = check_main3(Int(a.imq->quandle.n), a.det, d.mu()) ? "pass" : "fail";
        r["size_bound_attained"] = bound_attained(Int(a.imq->quandle.n), a.det, d.mu());
    } else {
        r["main3"] = "n/a";
        r["size_bound_attained"] = nullptr;
    }
    if (a.reindexing && a.reindexing->known) {
        r["reindexing_classes"] = a.reindexing->classes;
    } else {
        r["reindexing_classes"] = nullptr;
    }

    json checks = json::object();
    for (const auto& c : a.checks) checks[c.name] = c.pass;
    r["checks"] = checks;
    r["checks_pass"] = a.all_checks_pass();
    r["engine"] = kEngineVersion;
    return r;
}

std::string render_text(const std::string& file, const json& r) {
    std::ostringstream os;
    os << file << "\n";
    os << "  components " << r["mu"] << ", arcs " << r["arcs"] << ", crossings " << r["crossings"]
       << (r["evenized"].get<bool>() ? ", evenized" : "") << "\n";
    os << "  det " << r["det"].dump() << "\n";
    os << "  M     " << r["module"]["text"].get<std::string>() << "\n";
    os << "  ker w " << r["ker_w"]["text"].get<std::string>() << "\n";
    os << "  longitude orders " << join_sizes(r["longitudes"]["orders"]);
    if (!r["longitudes"]["zero_subset"].is_null())
        os << ", zero subset " << join_sizes(r["longitudes"]["zero_subset"]);
    os << "\n";
    if (r["qa"].is_string()) {
        os << "  Q_A   infinite\n";
    } else {
        os << "  Q_A   " << r["qa"]["size"] << " element(s), orbits " << join_sizes(r["qa"]["orbit_sizes"]) << "\n";
    }
    const json& imq = r["imq"];
    if (imq.contains("size")) {
        os << "  IMQ   " << imq["size"] << " element(s), orbits " << join_sizes(imq["orbit_sizes"])
           << (imq["semiregular"].get<bool>() ? ", semiregular" : ", not semiregular") << "\n";
    } else {
        os << "  IMQ   " << imq["status"].get<std::string>() << "\n";
    }
    os << "  characteristic compatibility " << r["characteristic_compatibility"].get<std::string>() << "\n";
    os << "  torsion parity profile";
    for (const auto& [v, c] : r["torsion_parity_profile"].items()) os << " " << v << "x" << c.get<int>();
    os << "\n";
    os << "  size bounds " << r["main3"].get<std::string>();
    if (!r["size_bound_attained"].is_null()) os << ", attains " << r["size_bound_attained"].get<std::string>();
    os << "\n";
    if (!r["reindexing_classes"].is_null()) {
        os << "  component classes";
        for (const auto& c : r["reindexing_classes"]) os << " " << join_sizes(c);
        os << "\n";
    }
    std::size_t failed = 0;
    for (const auto& [k, v] : r["checks"].items())
        if (!v.get<bool>()) {
            os << "  check FAILED: " << k << "\n";
            ++failed;
        }
    os << "  checks " << r["checks"].size() - failed << "/" << r["checks"].size() << " pass\n";
    return os.str();
}

std::string render_machine(const std::string& file, const json& r) {
    json out = r;
    out["file"] = file;
    return out.dump() + "\n";
}

}  // namespace nuqcli

#include "cli.hpp"

#include "cache.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

namespace nuqcli {

namespace fs = std::filesystem;
using namespace nuq;

namespace {

struct Flags {
    bool no_imq = false;
    std::size_t imq_cap = 0;
    std::string format = "text";
    std::string cache;
    int jobs = 1;
    std::string dump;
};

struct Outcome {
    int code = kOk;
    json report;  // null on error
    std::string error;
    std::optional<Analysis> analysis;  // only when computed fresh
};

std::string cache_path(const Flags& f) {
    if (!f.cache.empty()) return f.cache;
    if (const char* env = std::getenv("QUANDLE_CACHE"); env && *env) return env;
    return ".quandle-cache";
}

AnalysisOptions analysis_options(const Flags& f) {
    AnalysisOptions o;
    o.imq = !f.no_imq;
    o.caps.max_elements = f.imq_cap;
    return o;
}

std::optional<LinkDiagram> load_diagram(const fs::path& path, Outcome& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        out.code = kUsage;
        out.error = "cannot read file";
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_diagram(ss.str());
    } catch (const ParseError& e) {
        out.code = kUsage;
        out.error = "parse error at " + std::to_string(e.position) + ": " + e.what();
    } catch (const ValidationError& e) {
        out.code = kValidation;
        out.error = "invalid diagram:";
        for (const auto& v : e.violations) out.error += " [" + v.rule + "] " + v.message + ";";
        out.error.pop_back();
    }
    return std::nullopt;
}

int code_for_report(const json& r) {
    if (!r["checks_pass"].get<bool>()) return kInternal;
    if (r["imq"]["status"] == "capped") return kResourceCap;
    return kOk;
}

Outcome process(const fs::path& path, const Flags& f, ResultCache* cache, bool keep_analysis) {
    Outcome out;
    auto d = load_diagram(path, out);
    if (!d) return out;
    std::string key = sha256_hex(std::string(kEngineVersion) + "\nimq=" + (f.no_imq ? "0" : "1") +
                                 " cap=" + std::to_string(f.imq_cap) + "\n" + serialize_diagram(*d));
    if (cache && !keep_analysis) {
        if (auto hit = cache->get(key)) {
            out.report = *hit;
            out.code = code_for_report(out.report);
            return out;
        }
    }
    try {
        Analysis a = analyze(*d, analysis_options(f));
        out.report = build_report(a);
        if (keep_analysis) out.analysis = std::move(a);
    } catch (const InternalError& e) {
        out.code = kInternal;
        out.error = std::string("internal consistency failure: ") + e.what();
        return out;
    } catch (const std::exception& e) {
        out.code = kInternal;
        out.error = std::string("internal error: ") + e.what();
        return out;
    }
    if (cache) cache->put(key, out.report);
    out.code = code_for_report(out.report);
    return out;
}

std::string render(const Flags& f, const std::string& name, const json& r) {
    return f.format == "machine" ? render_machine(name, r) : render_text(name, r);
}

std::string render_error(const Flags& f, const std::string& name, const Outcome& o) {
    if (f.format == "machine") return json{{"file", name}, {"error", o.error}, {"exit_code", o.code}}.dump() + "\n";
    return name + "\n  ERROR (" + std::to_string(o.code) + ") " + o.error + "\n";
}

int cmd_report(const std::string& file, const Flags& f, std::ostream& out, std::ostream& err) {
    std::unique_ptr<ResultCache> cache = std::make_unique<ResultCache>(cache_path(f));
    bool dump = !f.dump.empty();
    Outcome o = process(file, f, cache.get(), dump);
    std::string name = fs::path(file).filename().string();
    if (o.report.is_null()) {
        err << render_error(f, name, o);
        return o.code;
    }
    out << render(f, name, o.report);
    if (dump) {
        if (o.analysis && o.analysis->imq) {
            std::ofstream d(f.dump);
            write_table(d, o.analysis->imq->quandle);
        } else {
            err << "no finite IMQ to dump\n";
        }
    }
    return o.code;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_compare(const std::string& f1, const std::string& f2, const Flags& f, std::ostream& out, std::ostream& err) {
    Outcome o1, o2;
    auto d1 = load_diagram(f1, o1);
    auto d2 = load_diagram(f2, o2);
    for (auto* p : {&o1, &o2})
        if (p->code != kOk) {
            err << render_error(f, p == &o1 ? f1 : f2, *p);
            return p->code;
        }
    AnalysisOptions opt = analysis_options(f);
    Analysis a1 = analyze(*d1, opt);
    Analysis a2 = analyze(*d2, opt);

    json rec;
    rec["groups_isomorphic"] = yes_no(a1.module.group == a2.module.group);
    bool h1 = a1.kerw.group == a2.kerw.group;
    rec["h1_isomorphic"] = yes_no(h1);
    PhiEq pe = phi_equivalent(a1.module, a2.module);
    rec["phi_equivalent"] = tri_name(pe.verdict);
    rec["phi_reason"] = pe.reason;

    std::string qa = "n/a";
    if (a1.qa && a2.qa) qa = yes_no(is_isomorphic(a1.qa->quandle, a2.qa->quandle).has_value());
    else if (a1.qa.has_value() != a2.qa.has_value()) qa = "no";
    rec["qa_isomorphic"] = qa;

    std::string imq = "n/a";
    if (a1.imq && a2.imq) imq = yes_no(is_isomorphic(a1.imq->quandle, a2.imq->quandle).has_value());
    else if ((a1.det == 0) != (a2.det == 0)) imq = "no";
    rec["imq_isomorphic"] = imq;

    // 1 => 2 <=> 3 => 4
    std::vector<std::string> broken;
    bool phi_yes = pe.verdict == Tri::Yes;
    if (imq == "yes" && pe.verdict == Tri::No) broken.push_back("imq isomorphic but not phi-equivalent");
    if (phi_yes && qa == "no") broken.push_back("phi-equivalent but Q_A not isomorphic");
    if (qa == "yes" && pe.verdict == Tri::No) broken.push_back("Q_A isomorphic but not phi-equivalent");
    if ((phi_yes || qa == "yes" || imq == "yes") && !h1) broken.push_back("equivalent but H1 differs");

    if (f.format == "machine") {
        json o = rec;
        o["files"] = {fs::path(f1).filename().string(), fs::path(f2).filename().string()};
        out << o.dump() << "\n";
    } else {
        out << fs::path(f1).filename().string() << " vs " << fs::path(f2).filename().string() << "\n";
        for (const char* k : {"groups_isomorphic", "h1_isomorphic", "phi_equivalent", "qa_isomorphic", "imq_isomorphic"})
            out << "  " << k << ": " << rec[k].get<std::string>() << "\n";
        out << "  reason: " << pe.reason << "\n";
    }
    if (!broken.empty()) {
        err << "BUG: implication chain violated:";
        for (const auto& b : broken) err << " " << b << ";";
        err << "\n";
        return kInternal;
    }
    int code = kOk;
    for (const Analysis* a : {&a1, &a2})
        if (a->imq_status == ImqStatus::Capped) code = kResourceCap;
    return code;
}

int cmd_corpus(const std::string& dir, const Flags& f, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    if (ec) {
        err << "cannot read directory " << dir << ": " << ec.message() << "\n";
        return kUsage;
    }
    std::sort(files.begin(), files.end());

    ResultCache cache(cache_path(f));
    std::vector<Outcome> results(files.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < files.size();) results[i] = process(files[i], f, &cache, false);
    };
    int jobs = std::max(1, std::min<int>(f.jobs, static_cast<int>(files.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kOk;
    std::size_t ok = 0, failed_checks = 0;
    std::vector<std::string> strictly_between;  // IMQ size meets neither bound
    for (std::size_t i = 0; i < files.size(); ++i) {
        const Outcome& o = results[i];
        std::string name = files[i].filename().string();
        code = std::max(code, o.code);
        if (o.report.is_null()) {
            out << render_error(f, name, o);
            continue;
        }
        ++ok;
        if (!o.report["checks_pass"].get<bool>()) ++failed_checks;
        if (o.report["size_bound_attained"] == "neither") strictly_between.push_back(name);
        out << render(f, name, o.report);
    }
    std::size_t errors = files.size() - ok;
    if (f.format == "machine") {
        out << json{{"summary", {{"diagrams", files.size()}, {"reports", ok}, {"errors", errors},
                                 {"property_failures", failed_checks}, {"bounds_not_attained", strictly_between}}}}
                   .dump()
            << "\n";
    } else {
        out << "summary: " << ok << " reports, " << errors << " errors, property checks "
            << (failed_checks == 0 ? "all pass" : std::to_string(failed_checks) + " diagrams failing") << "\n";
        out << "IMQ size strictly between bounds:";
        if (strictly_between.empty()) out << " none";
        for (const auto& n : strictly_between) out << " " << n;
        out << "\n";
    }
    err << "cache: " << cache.hits() << " hits, " << cache.misses() << " misses\n";
    return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Involutory medial quandles and nu-modules of link diagrams", "quandle"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_flag("--no-imq", f.no_imq, "Skip the IMQ computation");
    app.add_option("--imq-cap", f.imq_cap, "Element cap for the IMQ engine (0 = automatic)");
    app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--cache", f.cache, "Cache file (default .quandle-cache or $QUANDLE_CACHE)");
    app.add_option("--jobs", f.jobs, "Parallel jobs for corpus runs")->check(CLI::PositiveNumber);
    app.add_option("--dump-quandle", f.dump, "Write the IMQ table to this path (report only)");

    std::string file, file2, dir;
    auto* report = app.add_subcommand("report", "Report invariants of one diagram");
    report->add_option("file", file)->required();
    auto* compare = app.add_subcommand("compare", "Compare two diagrams");
    compare->add_option("file1", file)->required();
    compare->add_option("file2", file2)->required();
    auto* corpus = app.add_subcommand("corpus", "Report every diagram in a directory");
    corpus->add_option("dir", dir)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (report->parsed()) return cmd_report(file, f, out, err);
        if (compare->parsed()) return cmd_compare(file, file2, f, out, err);
        return cmd_corpus(dir, f, out, err);
    } catch (const InternalError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace nuqcli

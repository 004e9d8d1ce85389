// Command-line front end: parse JSON inputs, dispatch the library
// operations, and emit machine-readable reports.
//
// Exit codes: 0 = computed (including fail / not_exists results, which are
// encoded in the report), 1 = malformed input, 2 = internal invariant breach.

#include <hodgekit/json_io.hpp>
#include <hodgekit/spectral.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace hodgekit;
namespace io = hodgekit::json_io;
using nlohmann::json;

namespace {

struct Options {
    std::string in = "-";
    std::string format = "json";
    uint64_t seed = 2026;
    std::string indices;    // "1,2" (1-based)
    std::string mode = "star";
    std::string axes;       // "1,2" (1-based)
    std::string filtration = "wf";
};

std::vector<int> parse_indices(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t pos = 0;
        int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 1)
            throw std::invalid_argument("bad index list \"" + s + "\"");
        out.push_back(v - 1);
    }
    return out;
}

json read_input(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream f(path);
        if (!f) throw std::invalid_argument("cannot open " + path);
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("JSON parse error: ") + e.what());
    }
}

json dims_to_json(const std::map<int, int>& m) {
    json arr = json::array();
    for (const auto& [k, v] : m) arr.push_back(json{{"key", k}, {"value", v}});
    return arr;
}

json with_report(const Report& r, json payload = json::object()) {
    json out = io::to_json(r);
    for (auto& [k, v] : payload.items()) out[k] = v;
    return out;
}

NilpotentFamily family_of(const json& input) {
    if (input.contains("family")) return io::nilpotent_family_from(input.at("family"));
    return io::nilpotent_family_from(input);
}

/// Dispatch one command. Option values in the input JSON override defaults,
/// command-line flags override both (handled by the caller merging them in).
json run_command(const std::string& cmd, const json& input, const Options& opt) {
    if (cmd == "mf-pure") {
        Matrix n = io::matrix_from(input.at("matrix"));
        int center = input.value("center", 0);
        if (!n.is_nilpotent()) throw std::invalid_argument("matrix is not nilpotent");
        Filtration m = monodromy_filtration(n, center);
        Report cert = verify_relative_monodromy(m, n, Filtration::trivial(n.rows(), center));
        json grd = json::array();
        for (const auto& [k, d] : m.graded_dims())
            grd.push_back(json{{"weight", k}, {"dim", d}});
        return with_report(cert, {{"filtration", io::to_json(m)}, {"graded_dims", grd}});
    }
    if (cmd == "mf-relative") {
        Matrix n = io::matrix_from(input.at("matrix"));
        Filtration w = io::filtration_from(input.at("w"));
        RelMonodromyResult r = relative_monodromy(n, w);
        json out = with_report(r.certificate);
        out["status"] = r.exists() ? "exists" : "not_exists";
        if (r.exists()) out["filtration"] = io::to_json(*r.filtration);
        return out;
    }
    if (cmd == "star" || cmd == "shriek") {
        Matrix n = io::matrix_from(input.at("matrix"));
        Filtration w = io::filtration_from(input.at("w"));
        RelMonodromyResult r = relative_monodromy(n, w);
        if (!r.exists()) return json{{"status", "not_exists"}};
        Filtration res = (cmd == "star") ? star(n, w, *r.filtration)
                                         : shriek(n, w, *r.filtration);
        return json{{"status", "pass"}, {"filtration", io::to_json(res)}};
    }
    if (cmd == "wj") {
        NilpotentFamily fam = family_of(input);
        Filtration w = io::filtration_from(input.at("w"));
        std::vector<int> idx = parse_indices(
            input.contains("indices") ? input.at("indices").get<std::string>()
                                      : opt.indices);
        std::string mode = input.value("mode", opt.mode);
        IterMode m = (mode == "shriek") ? IterMode::shriek : IterMode::star;
        IteratedResult r = iterated(fam, idx, w, m);
        json out{{"detail", r.detail}};
        switch (r.status) {
            case IteratedResult::Status::ok: out["status"] = "pass"; break;
            case IteratedResult::Status::not_exists: out["status"] = "not_exists"; break;
            case IteratedResult::Status::order_dependent:
                out["status"] = "order_dependent";
                break;
        }
        if (r.filtration) out["filtration"] = io::to_json(*r.filtration);
        return out;
    }
    if (cmd == "koszul" || cmd == "ic" || cmd == "omega-z") {
        NilpotentFamily fam = family_of(input);
        CubeComplex c;
        if (cmd == "koszul") c = koszul(fam.dim, fam);
        else if (cmd == "ic") c = ic(fam.dim, fam);
        else {
            std::set<int> axes;
            for (int a : parse_indices(input.contains("axes")
                                           ? input.at("axes").get<std::string>()
                                           : opt.axes))
                axes.insert(a);
            c = omega_partial(fam.dim, fam, axes);
        }
        return json{{"status", "pass"},
                    {"complex", io::to_json(c.cx)},
                    {"cohomology", dims_to_json(c.cx.cohomology_dims())},
                    {"euler", c.cx.euler()}};
    }
    if (cmd == "ss") {
        FilteredComplex fc = io::filtered_complex_from(input);
        std::string name = input.value("filtration", opt.filtration);
        SpectralSequence ss = spectral_sequence(fc, name);
        json pages = json::array();
        for (int r = 1; r <= ss.last_page(); ++r) {
            json entries = json::array();
            for (const auto& [k, d] : ss.pages[size_t(r - 1)])
                entries.push_back(json{{"p", k.first}, {"q", k.second}, {"dim", d}});
            pages.push_back(json{{"r", r}, {"entries", entries}});
        }
        json einf = json::array();
        for (const auto& [k, d] : ss.einf)
            einf.push_back(json{{"p", k.first}, {"q", k.second}, {"dim", d}});
        return with_report(ss.report, {{"pages", pages},
                                       {"einf", einf},
                                       {"h", dims_to_json(ss.h_dims)}});
    }
    if (cmd == "hl-cohomology") {
        BigradedHL x = io::bigraded_hl_from(input);
        DCohomology h = d_cohomology(x);
        return with_report(h.report, {{"cohomology", io::to_json(h.h)}});
    }
    if (cmd == "check-mhs") {
        HodgeData h = io::hodge_data_from(input);
        return with_report(is_mhs(h));
    }
    if (cmd == "check-orbit") {
        HodgeData h = io::hodge_data_from(input);
        int w = input.at("weight").get<int>();
        const Pairing* s = nullptr;
        auto it = h.polarizations.find(w);
        if (it != h.polarizations.end()) s = &it->second;
        return with_report(is_nilpotent_orbit(h, w, s, opt.seed));
    }
    if (cmd == "check-imhs") {
        HodgeData h = io::hodge_data_from(input);
        return with_report(is_imhs(h, opt.seed));
    }
    if (cmd == "check-preadmissible") {
        Filtration w = io::filtration_from(input.at("w"));
        Filtration f = io::filtration_from(input.at("f"));
        Matrix n = io::matrix_from(input.at("n"));
        LimitMhsResult r = limit_mhs(w, f, n);
        json out = with_report(r.report);
        if (r.data) out["limit"] = io::to_json(*r.data);
        return out;
    }
    if (cmd == "check-hl") {
        BigradedHL x = io::bigraded_hl_from(input);
        return with_report(x.has_s ? validate_polarized_hl(x) : validate_hl(x));
    }
    if (cmd == "check-fmhc" || cmd == "check-lmhc") {
        FilteredComplex fc = io::filtered_complex_from(input);
        HCMode m = (cmd == "check-lmhc") ? HCMode::lmhc : HCMode::fmhc;
        return with_report(fmhc_lmhc_validate(fc, m));
    }
    if (cmd == "check-limit-object") {
        Filtration wf = io::filtration_from(input.at("wf"));
        Filtration w = io::filtration_from(input.at("w"));
        Filtration f = io::filtration_from(input.at("f"));
        Matrix n = io::matrix_from(input.at("n"));
        return with_report(limit_object_validate(wf, w, f, n));
    }
    if (cmd == "check-distributive") {
        std::vector<Filtration> fs;
        for (const json& e : input.at("filtrations"))
            fs.push_back(io::filtration_from(e));
        return with_report(is_distributive(fs));
    }
    throw std::invalid_argument("unknown command " + cmd);
}

void print_text(const json& out, std::ostream& os) {
    os << "status: " << out.value("status", "?") << "\n";
    for (const char* key : {"failures", "notes"}) {
        if (!out.contains(key)) continue;
        for (const json& f : out.at(key)) {
            os << "  [" << key << "] " << f.value("axiom", "");
            if (!f.value("location", "").empty()) os << " @ " << f.value("location", "");
            if (!f.value("detail", "").empty()) os << " : " << f.value("detail", "");
            os << "\n";
        }
    }
    if (out.contains("graded_dims")) {
        os << "  graded dims:";
        for (const json& e : out.at("graded_dims"))
            os << " " << e.at("weight").get<int>() << ":" << e.at("dim").get<int>();
        os << "\n";
    }
    if (out.contains("cohomology") && out.at("cohomology").is_array()) {
        os << "  cohomology dims:";
        for (const json& e : out.at("cohomology"))
            os << " " << e.at("key").get<int>() << ":" << e.at("value").get<int>();
        os << "\n";
    }
    if (out.contains("euler")) os << "  euler: " << out.at("euler").get<int>() << "\n";
    if (out.contains("einf")) {
        os << "  limit page:";
        for (const json& e : out.at("einf"))
            os << " (" << e.at("p").get<int>() << "," << e.at("q").get<int>()
               << "):" << e.at("dim").get<int>();
        os << "\n";
    }
}

void emit(const json& out, const Options& opt) {
    if (opt.format == "text") print_text(out, std::cout);
    else std::cout << out.dump(2) << "\n";
}

int run_one(const std::string& cmd, const Options& opt) {
    json input = read_input(opt.in);
    json out = run_command(cmd, input, opt);
    emit(out, opt);
    return 0;
}

int run_batch(const std::string& dir, const Options& opt) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    json results = json::array();
    int failures = 0, errors = 0;
    for (const auto& p : files) {
        json entry{{"file", p.filename().string()}};
        try {
            std::ifstream f(p);
            json input = json::parse(f);
            std::string cmd = input.at("command").get<std::string>();
            json out = run_command(cmd, input, opt);
            std::string st = out.value("status", "fail");
            if (st == "fail") ++failures;
            entry["result"] = out;
        } catch (const std::exception& ex) {
            ++errors;
            entry["error"] = ex.what();
        }
        results.push_back(std::move(entry));
    }
    json out{{"status", (failures + errors) == 0 ? "pass" : "fail"},
             {"files", int(files.size())},
             {"failures", failures},
             {"errors", errors},
             {"results", results}};
    emit(out, opt);
    return 0;
}

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--in", opt.in, "input JSON file, or - for stdin");
    sub->add_option("--format", opt.format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--seed", opt.seed, "seed for sampled checks");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact linear algebra of degenerating mixed Hodge data"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("HODGEKIT_SEED")) opt.seed = std::strtoull(env, nullptr, 10);

    std::string pending_cmd;
    std::string batch_dir;

    auto* mf = app.add_subcommand("mf", "monodromy filtrations");
    mf->require_subcommand(1);
    for (const char* name : {"pure", "relative"}) {
        auto* s = mf->add_subcommand(name);
        add_common(s, opt);
        std::string cmd = std::string("mf-") + name;
        s->callback([&pending_cmd, cmd] { pending_cmd = cmd; });
    }
    for (const char* name : {"star", "shriek", "koszul", "ic"}) {
        auto* s = app.add_subcommand(name);
        add_common(s, opt);
        std::string cmd = name;
        s->callback([&pending_cmd, cmd] { pending_cmd = cmd; });
    }
    {
        auto* s = app.add_subcommand("wj", "iterated star/shriek filtration");
        add_common(s, opt);
        s->add_option("--indices", opt.indices, "1-based operator indices, comma separated");
        s->add_option("--mode", opt.mode)->check(CLI::IsMember({"star", "shriek"}));
        s->callback([&pending_cmd] { pending_cmd = "wj"; });
    }
    {
        auto* s = app.add_subcommand("omega-z", "partial image cube");
        add_common(s, opt);
        s->add_option("--axes", opt.axes, "1-based axes keeping the full space");
        s->callback([&pending_cmd] { pending_cmd = "omega-z"; });
    }
    {
        auto* s = app.add_subcommand("ss", "spectral sequence of a filtered complex");
        add_common(s, opt);
        s->add_option("--filtration", opt.filtration, "filtration name");
        s->callback([&pending_cmd] { pending_cmd = "ss"; });
    }
    {
        auto* hl = app.add_subcommand("hl", "bigraded Hodge-Lefschetz structures");
        hl->require_subcommand(1);
        auto* s = hl->add_subcommand("cohomology");
        add_common(s, opt);
        s->callback([&pending_cmd] { pending_cmd = "hl-cohomology"; });
    }
    {
        auto* check = app.add_subcommand("check", "validators");
        check->require_subcommand(1);
        for (const char* name : {"mhs", "orbit", "imhs", "preadmissible", "hl", "fmhc",
                                 "lmhc", "limit-object", "distributive"}) {
            auto* s = check->add_subcommand(name);
            add_common(s, opt);
            std::string cmd = std::string("check-") + name;
            s->callback([&pending_cmd, cmd] { pending_cmd = cmd; });
        }
    }
    {
        auto* s = app.add_subcommand("batch", "run every fixture in a directory");
        s->add_option("dir", batch_dir, "fixture directory")->required();
        s->add_option("--format", opt.format)->check(CLI::IsMember({"json", "text"}));
        s->add_option("--seed", opt.seed);
        s->callback([&pending_cmd] { pending_cmd = "batch"; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (pending_cmd == "batch") return run_batch(batch_dir, opt);
        return run_one(pending_cmd, opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

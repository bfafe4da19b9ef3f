#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbn/decide.hpp"
#include "cbn/landau.hpp"
#include "cbn/reduction.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace cbn;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot write " + path);
    out << content;
}

// Width parameter: decimal digits, or a binary string after "0b".
Int parse_width(const std::string& text) {
    if (text.rfind("0b", 0) == 0) {
        if (text.size() == 2) throw format_error("empty binary width");
        Int k = 0;
        for (std::size_t i = 2; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1')
                throw format_error("invalid binary width " + text);
            k = k * 2 + (text[i] - '0');
        }
        return k;
    }
    if (text.empty()) throw format_error("empty width");
    for (char c : text)
        if (c < '0' || c > '9') throw format_error("invalid width " + text);
    return Int(text);
}

struct Output {
    bool structured = false;
    json doc;

    // Text lines go straight out; in structured mode only the document is
    // printed, once, at the end of the run.
    void line(const std::string& s) {
        if (!structured) std::cout << s << "\n";
    }
    void flush() {
        if (structured) std::cout << doc.dump(2) << "\n";
    }
};

int run_analyze(const std::string& path, Output& out) {
    Digraph d = Digraph::parse(read_file(path));
    auto scc = scc_decompose(d);
    out.doc["command"] = "analyze";
    out.doc["vertices"] = d.order();
    out.doc["arcs"] = static_cast<int>(d.arcs().size());
    out.line("vertices: " + std::to_string(d.order()));
    out.line("arcs: " + std::to_string(d.arcs().size()));
    out.line("components: " + std::to_string(scc.count()));
    json components = json::array();
    for (int id = 0; id < scc.count(); ++id) {
        std::string members;
        for (int v : scc.components[id]) members += (members.empty() ? "" : " ") + std::to_string(v);
        json c;
        c["vertices"] = scc.components[id];
        c["nontrivial"] = static_cast<bool>(scc.nontrivial[id]);
        if (scc.nontrivial[id]) {
            int cyc = index_of_cyclicity_component(d, scc.components[id]);
            c["cyclicity"] = cyc;
            out.line("component " + std::to_string(id + 1) + ": " + members +
                     " (nontrivial, c = " + std::to_string(cyc) + ")");
        } else {
            c["cyclicity"] = nullptr;
            out.line("component " + std::to_string(id + 1) + ": " + members + " (trivial)");
        }
        components.push_back(std::move(c));
    }
    out.doc["components"] = std::move(components);
    out.doc["cyclicity"] = index_of_cyclicity(d).str();
    out.line("c(D) = " + index_of_cyclicity(d).str());
    auto g = girth(d);
    out.doc["girth"] = g ? json(*g) : json(nullptr);
    out.line("girth: " + (g ? std::to_string(*g) : "none"));
    bool symmetric = is_symmetric(d);
    out.doc["symmetric"] = symmetric;
    out.line(std::string("symmetric: ") + (symmetric ? "yes" : "no"));
    if (symmetric) {
        bool bip = is_bipartite_symmetric(d);
        out.doc["bipartite"] = bip;
        out.line(std::string("bipartite: ") + (bip ? "yes" : "no"));
    } else {
        out.doc["bipartite"] = nullptr;
    }
    return 0;
}

int run_decide(const std::string& path, const std::string& problem, const std::string& width,
               bool no_oracle, int oracle_limit, bool decision_exit, Output& out) {
    ConjunctiveNetwork f{Digraph::parse(read_file(path))};
    Int k = parse_width(width);
    Decision decision = [&] {
        if (problem == "plce") return decide_plce_general(f, k, !no_oracle, oracle_limit);
        if (problem == "kplce") return decide_kplce_prime_power(f, k);
        if (problem == "kblce") return decide_k_blce(f, k, !no_oracle, oracle_limit);
        if (problem == "kslce") return decide_k_slce(f, k, !no_oracle, oracle_limit);
        throw CLI::ValidationError("--problem", "unknown problem " + problem);
    }();
    out.doc["command"] = "decide";
    out.doc["problem"] = problem;
    out.doc["k"] = k.str();
    out.doc["answer"] = decision.is_yes() ? "yes" : decision.is_no() ? "no" : "unknown";
    out.doc["method"] = decision.method;
    out.doc["schedule"] = decision.schedule ? json(decision.schedule->format()) : json(nullptr);
    out.doc["witness"] = decision.witness ? json(decision.witness->to_string()) : json(nullptr);
    if (!out.structured) std::cout << decision.to_string();
    if (decision_exit) return decision.is_yes() ? 0 : decision.is_no() ? 1 : 2;
    return 0;
}

int run_attractors(const std::string& path, const std::string& schedule_text,
                   const std::string& schedule_file, int limit, Output& out) {
    ConjunctiveNetwork f{Digraph::parse(read_file(path))};
    std::string stext = schedule_text;
    if (!schedule_file.empty()) stext = read_file(schedule_file);
    json used_schedule = nullptr;
    if (!stext.empty()) {
        UpdateSchedule s = UpdateSchedule::parse(stext, f.order());
        used_schedule = s.format();
        f = apply_schedule(f, s);
    }
    AttractorReport report = enumerate_attractors(f, limit);
    out.doc["command"] = "attractors";
    out.doc["vertices"] = report.n;
    out.doc["schedule"] = used_schedule;
    out.line("vertices: " + std::to_string(report.n));
    out.line("fixed points: " + std::to_string(report.fixed_points.size()));
    json fixed = json::array();
    for (const auto& x : report.fixed_points) {
        fixed.push_back(x.to_string());
        out.line("  " + x.to_string());
    }
    out.doc["fixed_points"] = std::move(fixed);
    out.line("limit cycles: " + std::to_string(report.limit_cycles.size()));
    json cycles = json::array();
    for (const auto& cycle : report.limit_cycles) {
        json c;
        c["length"] = cycle.length();
        json states = json::array();
        std::string lined = "  length " + std::to_string(cycle.length()) + ":";
        for (const auto& x : cycle.states) {
            states.push_back(x.to_string());
            lined += " " + x.to_string();
        }
        c["states"] = std::move(states);
        cycles.push_back(std::move(c));
        out.line(lined);
    }
    out.doc["limit_cycles"] = std::move(cycles);
    return 0;
}

int run_reduce(const std::string& path, const std::string& kind, const std::string& width,
               const std::string& prefix, Output& out) {
    CnfFormula psi = CnfFormula::parse(read_file(path));
    Digraph d(1);
    GadgetIndex index;
    Int k;
    if (kind == "plce") {
        PlceInstance inst = sat_to_plce(psi);
        d = inst.network.digraph();
        index = inst.index;
        k = inst.k;
    } else if (kind == "blce2" || kind == "blcek") {
        long long width_k = 2;
        if (kind == "blcek") {
            Int parsed = parse_width(width.empty() ? "3" : width);
            if (parsed < 2) throw precondition_error("width must be at least 2");
            if (parsed > 4096) throw capacity_error("stretched instance too large");
            width_k = parsed.convert_to<long long>();
        }
        BlceInstance inst = sat_to_kblce(psi, width_k);
        d = inst.digraph;
        index = inst.index;
        k = width_k;
    } else {
        throw CLI::ValidationError("--kind", "unknown kind " + kind);
    }

    std::string digraph_file = prefix + ".digraph";
    std::string index_file = prefix + ".index";
    write_file(digraph_file, d.format());
    write_file(index_file, index.format());
    // Emitted files must round-trip before the run reports success.
    if (!(Digraph::parse(read_file(digraph_file)) == d))
        throw std::runtime_error("internal: emitted digraph does not round-trip");
    if (!(GadgetIndex::parse(read_file(index_file)) == index))
        throw std::runtime_error("internal: emitted index does not round-trip");

    out.doc["command"] = "reduce";
    out.doc["kind"] = kind;
    out.doc["vertices"] = d.order();
    out.doc["arcs"] = static_cast<int>(d.arcs().size());
    out.doc["k"] = k.str();
    out.doc["digraph_file"] = digraph_file;
    out.doc["index_file"] = index_file;
    out.line("vertices: " + std::to_string(d.order()));
    out.line("arcs: " + std::to_string(d.arcs().size()));
    out.line("k: " + k.str());
    out.line("wrote " + digraph_file + " and " + index_file);
    return 0;
}

int run_landau(int n, const std::string& emit_path, Output& out) {
    LandauRecord record = landau(n);
    out.doc["command"] = "landau";
    out.doc["n"] = record.n;
    out.doc["value"] = record.value.str();
    out.doc["partition"] = record.partition;
    out.line("n: " + std::to_string(record.n));
    out.line("value: " + record.value.str());
    std::string parts;
    for (int part : record.partition) parts += " " + std::to_string(part);
    out.line("partition:" + parts);
    if (!emit_path.empty()) {
        auto [f, x] = extremal_network(n);
        write_file(emit_path, f.digraph().format());
        out.doc["network_file"] = emit_path;
        out.doc["configuration"] = x.to_string();
        out.line("network: " + emit_path);
        out.line("configuration: " + x.to_string());
    } else {
        out.doc["network_file"] = nullptr;
        out.doc["configuration"] = nullptr;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"conjunctive boolean network toolkit"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--json", out.structured, "structured output (one document on stdout)");

    std::string in_path, problem, width, schedule_text, schedule_file, kind, prefix, emit_path;
    bool no_oracle = false, decision_exit = false;
    int oracle_limit = 20, attractor_limit = 20, landau_n = 1;

    auto* analyze = app.add_subcommand("analyze", "structure of a digraph");
    analyze->add_option("file", in_path, "digraph file")->required();

    auto* decide = app.add_subcommand("decide", "limit-cycle existence problems");
    decide->add_option("file", in_path, "digraph file")->required();
    decide->add_option("--problem", problem, "plce | kplce | kblce | kslce")->required();
    decide->add_option("--k", width, "cycle length (decimal or 0b binary)")->required();
    decide->add_flag("--no-oracle", no_oracle, "never fall back to state-space enumeration");
    decide->add_option("--oracle-limit", oracle_limit, "max vertices for the oracle fallback");
    decide->add_flag("--decision-exit", decision_exit, "exit 0 = yes, 1 = no, 2 = unknown");

    auto* attractors = app.add_subcommand("attractors", "exhaustive attractor report");
    attractors->add_option("file", in_path, "digraph file")->required();
    attractors->add_option("--schedule", schedule_text, "block schedule, e.g. \"1 3; 2\"");
    attractors->add_option("--schedule-file", schedule_file, "file holding a block schedule");
    attractors->add_option("--limit", attractor_limit, "max vertices to enumerate");

    auto* reduce = app.add_subcommand("reduce", "3-CNF to limit-cycle instances");
    reduce->add_option("file", in_path, "DIMACS 3-CNF file")->required();
    reduce->add_option("--kind", kind, "plce | blce2 | blcek")->required();
    reduce->add_option("--k", width, "stretch width for blcek");
    reduce->add_option("--out", prefix, "output path prefix")->required();

    auto* landau_cmd = app.add_subcommand("landau", "largest limit-cycle length for n vertices");
    landau_cmd->add_option("--n", landau_n, "number of vertices")->required();
    landau_cmd->add_option("--emit-network", emit_path, "write an extremal network file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        int code = 0;
        if (*analyze) code = run_analyze(in_path, out);
        if (*decide)
            code = run_decide(in_path, problem, width, no_oracle, oracle_limit, decision_exit, out);
        if (*attractors)
            code = run_attractors(in_path, schedule_text, schedule_file, attractor_limit, out);
        if (*reduce) code = run_reduce(in_path, kind, width, prefix, out);
        if (*landau_cmd) code = run_landau(landau_n, emit_path, out);
        out.flush();
        return code;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 65;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 69;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
}

#include <cstdio>
#include <string>

#include <json.hpp>

#include "qassert/driver.hpp"

namespace qassert::driver {

namespace {

using engine::Status;
using engine::Verdict;
using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string verdict_registers(const Report& r, const Verdict& v) {
    std::string s = lang::slice_name(r.registers, v.assertion.a);
    if (v.assertion.kind == lang::AssertKind::Entangled ||
        v.assertion.kind == lang::AssertKind::Product) {
        s += "," + lang::slice_name(r.registers, v.assertion.b);
    }
    if (v.assertion.kind == lang::AssertKind::Classical) {
        s += "==" + std::to_string(v.assertion.expected);
    }
    return s;
}

json histogram_json(const stats::Histogram& h) {
    json out = json::object();
    for (const auto& [outcome, count] : h.counts) {
        out[std::to_string(outcome)] = count;
    }
    return out;
}

} // namespace

std::string render_text(const Report& r) {
    std::string out;
    out += "program: " + r.program_name;
    if (r.bug) out += "  [bug: " + *r.bug + "]";
    out += "\n";
    out += "alpha=" + fmt_double(r.alpha) + " seed=" + std::to_string(r.seed);
    if (r.forced_shots) out += " shots=" + std::to_string(*r.forced_shots);
    if (r.per_shot_rerun) out += " per-shot-rerun";
    out += "\n";
    for (const std::string& w : r.warnings) {
        out += "warning: " + w + "\n";
    }
    for (const Verdict& v : r.verdicts) {
        char line[256];
        std::string stat = "-";
        std::string dof = "-";
        if (v.chi) {
            stat = fmt_double(v.chi->statistic);
            dof = std::to_string(v.chi->dof);
        }
        const std::string p = v.p_value ? fmt_double(*v.p_value) : "-";
        std::string flags;
        if (v.degenerate) flags += " degenerate";
        if (v.low_power) flags += " low-power";
        std::snprintf(line, sizeof line, "line %-4d %-13s %-18s shots=%-5d stat=%-9s dof=%-3s p=%-9s %s%s\n",
                      v.assertion.line, lang::assert_kind_name(v.assertion.kind),
                      verdict_registers(r, v).c_str(), v.shots, stat.c_str(), dof.c_str(),
                      p.c_str(), engine::status_name(v.status), flags.c_str());
        out += line;
        if (!v.note.empty()) {
            out += "          note: " + v.note + "\n";
        }
    }
    out += "overall: ";
    out += engine::status_name(r.overall);
    out += "\n";
    return out;
}

std::string render_json(const Report& r) {
    json root = json::object();
    root["program"] = r.program_name;
    root["bug"] = r.bug ? json(*r.bug) : json(nullptr);
    root["alpha"] = r.alpha;
    root["seed"] = r.seed;
    root["shots"] = r.forced_shots ? json(*r.forced_shots) : json(nullptr);
    root["per_shot_rerun"] = r.per_shot_rerun;

    json regs = json::array();
    for (const lang::RegisterDecl& reg : r.registers) {
        regs.push_back({{"name", reg.name}, {"width", reg.width}, {"offset", reg.offset}});
    }
    root["registers"] = regs;
    root["warnings"] = r.warnings;

    json asserts = json::array();
    for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
        const Verdict& v = r.verdicts[i];
        json a = json::object();
        a["index"] = i;
        a["line"] = v.assertion.line;
        a["kind"] = lang::assert_kind_name(v.assertion.kind);
        json names = json::array();
        names.push_back(lang::slice_name(r.registers, v.assertion.a));
        if (v.assertion.kind == lang::AssertKind::Entangled ||
            v.assertion.kind == lang::AssertKind::Product) {
            names.push_back(lang::slice_name(r.registers, v.assertion.b));
        }
        a["registers"] = names;
        if (v.assertion.kind == lang::AssertKind::Classical) {
            a["expected"] = v.assertion.expected;
        }
        a["shots"] = v.shots;
        a["seed"] = v.seed;
        a["status"] = engine::status_name(v.status);
        a["degenerate"] = v.degenerate;
        a["low_power"] = v.low_power;
        if (v.p_value) a["p_value"] = *v.p_value;
        if (v.chi) {
            a["statistic"] = v.chi->statistic;
            a["dof"] = v.chi->dof;
        }
        if (!v.note.empty()) a["note"] = v.note;
        if (!v.deviating.empty()) a["deviating"] = v.deviating;
        a["histogram"] = histogram_json(v.hist_a);
        if (v.assertion.kind == lang::AssertKind::Entangled ||
            v.assertion.kind == lang::AssertKind::Product) {
            a["histogram_b"] = histogram_json(v.hist_b);
            json table = json::object();
            json rows = json::array(), cols = json::array(), counts = json::array();
            if (v.table) {
                for (std::uint64_t row : v.table->row_labels()) rows.push_back(row);
                for (std::uint64_t col : v.table->col_labels()) cols.push_back(col);
                for (std::uint64_t row : v.table->row_labels()) {
                    json line = json::array();
                    for (std::uint64_t col : v.table->col_labels()) {
                        line.push_back(v.table->cell(row, col));
                    }
                    counts.push_back(line);
                }
            }
            table["rows"] = rows;
            table["cols"] = cols;
            table["counts"] = counts;
            a["table"] = table;
        }
        a["outcomes"] = histogram_json(v.full_hist);
        asserts.push_back(a);
    }
    root["assertions"] = asserts;
    root["overall"] = engine::status_name(r.overall);
    return root.dump(2) + "\n";
}

} // namespace qassert::driver

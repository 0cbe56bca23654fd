#include "wen/milp/mps.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace wen::milp {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool legal_token(const std::string& s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isspace(c) || !std::isprint(c) || c == '\'' || c == '*' || c == '$';
    });
}

std::string sanitize(const std::string& s, std::unordered_set<std::string>& used,
                     std::map<std::string, std::string>& name_map) {
    std::string t = s;
    for (char& c : t) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isspace(u) || !std::isprint(u) || c == '\'' || c == '*' || c == '$') c = '_';
    }
    if (t.empty()) t = "_";
    std::string candidate = t;
    int k = 1;
    while (used.count(candidate)) candidate = t + "~" + std::to_string(k++);
    used.insert(candidate);
    if (candidate != s) name_map[candidate] = s;
    return candidate;
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

double parse_num(const std::string& s, const std::string& where) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("MPS: bad numeric value '" + s + "' in " + where);
    }
}

}  // namespace

MpsDocument export_mps(const MilpProblem& p) {
    MpsDocument doc;
    std::unordered_set<std::string> used_rows, used_cols;
    std::ostringstream out;

    std::string model = p.name;
    if (!legal_token(model)) model = "MODEL";
    out << "NAME " << model << "\n";

    // rows
    used_rows.insert("OBJ");
    std::vector<std::string> row_names;
    out << "ROWS\n N  OBJ\n";
    for (const auto& c : p.constraints()) {
        std::string rn = sanitize(c.name, used_rows, doc.name_map);
        row_names.push_back(rn);
        char s = c.sense == Sense::LessEqual ? 'L' : (c.sense == Sense::Equal ? 'E' : 'G');
        out << " " << s << "  " << rn << "\n";
    }

    // per-column entries in row order, objective first
    std::vector<double> objcoef(static_cast<size_t>(p.num_variables()), 0.0);
    std::vector<bool> has_obj(static_cast<size_t>(p.num_variables()), false);
    for (const auto& [v, c] : p.objective()) {
        objcoef[static_cast<size_t>(v)] = c;
        has_obj[static_cast<size_t>(v)] = true;
    }
    std::vector<std::vector<std::pair<int, double>>> colentries(
        static_cast<size_t>(p.num_variables()));
    for (int r = 0; r < p.num_constraints(); ++r) {
        for (const auto& [v, c] : p.constraints()[static_cast<size_t>(r)].terms)
            colentries[static_cast<size_t>(v)].push_back({r, c});
    }

    std::vector<std::string> col_names;
    for (const auto& v : p.variables())
        col_names.push_back(sanitize(v.name, used_cols, doc.name_map));

    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (int j = 0; j < p.num_variables(); ++j) {
        bool want_int = p.variables()[static_cast<size_t>(j)].type == VarType::Binary;
        if (want_int != in_int) {
            out << "    MARKER" << marker++ << "  'MARKER'  "
                << (want_int ? "'INTORG'" : "'INTEND'") << "\n";
            in_int = want_int;
        }
        std::vector<std::pair<std::string, double>> entries;
        if (has_obj[static_cast<size_t>(j)]) entries.push_back({"OBJ", objcoef[static_cast<size_t>(j)]});
        for (const auto& [r, c] : colentries[static_cast<size_t>(j)])
            entries.push_back({row_names[static_cast<size_t>(r)], c});
        if (entries.empty()) entries.push_back({"OBJ", 0.0});  // keep the column declared
        for (size_t k = 0; k < entries.size(); k += 2) {
            out << "    " << col_names[static_cast<size_t>(j)];
            out << "  " << entries[k].first << "  " << fmt(entries[k].second);
            if (k + 1 < entries.size())
                out << "  " << entries[k + 1].first << "  " << fmt(entries[k + 1].second);
            out << "\n";
        }
    }
    if (in_int) out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";

    out << "RHS\n";
    for (int r = 0; r < p.num_constraints(); ++r) {
        double rhs = p.constraints()[static_cast<size_t>(r)].rhs;
        if (rhs != 0.0)
            out << "    RHS  " << row_names[static_cast<size_t>(r)] << "  " << fmt(rhs) << "\n";
    }
    if (p.objective_constant() != 0.0)
        out << "    RHS  OBJ  " << fmt(-p.objective_constant()) << "\n";

    out << "BOUNDS\n";
    for (int j = 0; j < p.num_variables(); ++j) {
        const auto& v = p.variables()[static_cast<size_t>(j)];
        const std::string& cn = col_names[static_cast<size_t>(j)];
        if (v.lower == v.upper) {
            out << " FX BND  " << cn << "  " << fmt(v.lower) << "\n";
        } else if (v.lower == -kInf && v.upper == kInf) {
            out << " FR BND  " << cn << "\n";
        } else {
            if (v.lower == -kInf)
                out << " MI BND  " << cn << "\n";
            else if (v.lower != 0.0)
                out << " LO BND  " << cn << "  " << fmt(v.lower) << "\n";
            if (v.upper != kInf) out << " UP BND  " << cn << "  " << fmt(v.upper) << "\n";
        }
    }
    out << "ENDATA\n";
    doc.text = out.str();
    return doc;
}

MilpProblem parse_mps(const std::string& text) {
    MilpProblem p;
    enum class Section { None, Name, Rows, Columns, Rhs, Ranges, Bounds, Done };
    Section sec = Section::None;

    struct RowInfo {
        int index = -1;  // -1 for the objective
        Sense sense = Sense::LessEqual;
    };
    std::unordered_map<std::string, RowInfo> rows;
    std::string obj_row;
    // accumulate rows/columns; build constraints at the end
    struct PendingRow {
        std::string name;
        Sense sense;
        double rhs = 0.0;
        double range = 0.0;
        bool has_range = false;
        std::vector<std::pair<int, double>> terms;
    };
    std::vector<PendingRow> pending;
    struct ColInfo {
        double lower = 0.0;
        double upper = kInf;
        bool integer = false;
        bool lower_set = false, upper_set = false;
        std::vector<std::pair<std::string, double>> entries;  // row name, coeff
    };
    std::vector<std::string> col_order;
    std::unordered_map<std::string, int> col_index;
    std::vector<ColInfo> cols;
    double obj_constant = 0.0;
    bool in_int = false;

    auto get_col = [&](const std::string& name) -> int {
        auto it = col_index.find(name);
        if (it != col_index.end()) return it->second;
        int idx = static_cast<int>(cols.size());
        col_index.emplace(name, idx);
        col_order.push_back(name);
        cols.emplace_back();
        cols.back().integer = in_int;
        return idx;
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        bool header = !std::isspace(static_cast<unsigned char>(line[0]));
        auto tok = tokens(line);
        if (tok.empty()) continue;

        if (header) {
            const std::string& kw = tok[0];
            if (kw == "NAME") {
                p.name = tok.size() > 1 ? tok[1] : "model";
                sec = Section::Name;
            } else if (kw == "ROWS") {
                sec = Section::Rows;
            } else if (kw == "COLUMNS") {
                if (rows.empty()) throw std::runtime_error("MPS: COLUMNS before ROWS");
                sec = Section::Columns;
            } else if (kw == "RHS") {
                sec = Section::Rhs;
            } else if (kw == "RANGES") {
                sec = Section::Ranges;
            } else if (kw == "BOUNDS") {
                sec = Section::Bounds;
            } else if (kw == "ENDATA") {
                sec = Section::Done;
                break;
            } else if (kw == "OBJSENSE") {
                sec = Section::Name;  // body handled below; only MIN is accepted
            } else {
                throw std::runtime_error("MPS: unknown section '" + kw + "'");
            }
            continue;
        }

        switch (sec) {
            case Section::Name: {
                if (tok.size() == 1 && (tok[0] == "MAX" || tok[0] == "MAXIMIZE"))
                    throw std::runtime_error("MPS: maximization is not supported");
                break;
            }
            case Section::Rows: {
                if (tok.size() != 2) throw std::runtime_error("MPS: malformed ROWS line: " + line);
                const std::string& s = tok[0];
                const std::string& name = tok[1];
                if (rows.count(name)) throw std::runtime_error("MPS: duplicate row '" + name + "'");
                if (s == "N") {
                    if (obj_row.empty()) {
                        obj_row = name;
                        rows[name] = {-1, Sense::LessEqual};
                    }
                    // extra free rows are ignored
                } else {
                    Sense sense = s == "L"   ? Sense::LessEqual
                                  : s == "G" ? Sense::GreaterEqual
                                  : s == "E" ? Sense::Equal
                                             : throw std::runtime_error(
                                                   "MPS: bad row sense '" + s + "'");
                    rows[name] = {static_cast<int>(pending.size()), sense};
                    pending.push_back({name, sense, 0.0, 0.0, false, {}});
                }
                break;
            }
            case Section::Columns: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'") {
                    if (tok[2] == "'INTORG'")
                        in_int = true;
                    else if (tok[2] == "'INTEND'")
                        in_int = false;
                    else
                        throw std::runtime_error("MPS: bad marker: " + line);
                    break;
                }
                if (tok.size() != 3 && tok.size() != 5)
                    throw std::runtime_error("MPS: malformed COLUMNS line: " + line);
                int col = get_col(tok[0]);
                for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                    const std::string& rname = tok[k];
                    double val = parse_num(tok[k + 1], "COLUMNS");
                    if (!rows.count(rname))
                        throw std::runtime_error("MPS: reference to undeclared row '" + rname +
                                                 "'");
                    cols[static_cast<size_t>(col)].entries.push_back({rname, val});
                }
                break;
            }
            case Section::Rhs: {
                if (tok.size() != 3 && tok.size() != 5)
                    throw std::runtime_error("MPS: malformed RHS line: " + line);
                for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                    const std::string& rname = tok[k];
                    double val = parse_num(tok[k + 1], "RHS");
                    auto it = rows.find(rname);
                    if (it == rows.end())
                        throw std::runtime_error("MPS: reference to undeclared row '" + rname +
                                                 "'");
                    if (it->second.index < 0)
                        obj_constant = -val;
                    else
                        pending[static_cast<size_t>(it->second.index)].rhs = val;
                }
                break;
            }
            case Section::Ranges: {
                if (tok.size() != 3 && tok.size() != 5)
                    throw std::runtime_error("MPS: malformed RANGES line: " + line);
                for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                    auto it = rows.find(tok[k]);
                    if (it == rows.end() || it->second.index < 0)
                        throw std::runtime_error("MPS: RANGES on unknown row '" + tok[k] + "'");
                    auto& pr = pending[static_cast<size_t>(it->second.index)];
                    pr.range = parse_num(tok[k + 1], "RANGES");
                    pr.has_range = true;
                }
                break;
            }
            case Section::Bounds: {
                const std::string& type = tok[0];
                if (tok.size() < 3) throw std::runtime_error("MPS: malformed BOUNDS line: " + line);
                int col = get_col(tok[2]);
                auto& ci = cols[static_cast<size_t>(col)];
                auto need_val = [&]() {
                    if (tok.size() < 4)
                        throw std::runtime_error("MPS: bound needs a value: " + line);
                    return parse_num(tok[3], "BOUNDS");
                };
                if (type == "UP" || type == "UI") {
                    ci.upper = need_val();
                    ci.upper_set = true;
                    if (type == "UI") ci.integer = true;
                } else if (type == "LO" || type == "LI") {
                    ci.lower = need_val();
                    ci.lower_set = true;
                    if (type == "LI") ci.integer = true;
                } else if (type == "FX") {
                    ci.lower = ci.upper = need_val();
                    ci.lower_set = ci.upper_set = true;
                } else if (type == "FR") {
                    ci.lower = -kInf;
                    ci.upper = kInf;
                    ci.lower_set = ci.upper_set = true;
                } else if (type == "MI") {
                    ci.lower = -kInf;
                    ci.lower_set = true;
                } else if (type == "PL") {
                    ci.upper = kInf;
                    ci.upper_set = true;
                } else if (type == "BV") {
                    ci.integer = true;
                    ci.lower = 0.0;
                    ci.upper = 1.0;
                    ci.lower_set = ci.upper_set = true;
                } else {
                    throw std::runtime_error("MPS: unknown bound type '" + type + "'");
                }
                break;
            }
            case Section::None:
                throw std::runtime_error("MPS: data before any section header");
            default:
                break;
        }
    }
    if (obj_row.empty() && pending.empty() && cols.empty())
        throw std::runtime_error("MPS: no content");

    // integer columns default to [0,1] when no explicit bounds were given
    for (size_t j = 0; j < cols.size(); ++j) {
        auto& ci = cols[j];
        if (ci.integer && !ci.upper_set) ci.upper = 1.0;
        if (ci.integer && (ci.lower < 0.0 || ci.upper > 1.0))
            throw std::runtime_error("MPS: general integer variable '" + col_order[j] +
                                     "' is not supported (binaries only)");
    }

    for (size_t j = 0; j < cols.size(); ++j) {
        const auto& ci = cols[j];
        p.add_variable(col_order[j], ci.lower, ci.upper,
                       ci.integer ? VarType::Binary : VarType::Continuous);
    }
    for (size_t j = 0; j < cols.size(); ++j) {
        for (const auto& [rname, val] : cols[j].entries) {
            const auto& ri = rows.at(rname);
            if (ri.index < 0)
                p.add_objective_coeff(static_cast<int>(j), val);
            else
                pending[static_cast<size_t>(ri.index)].terms.push_back(
                    {static_cast<int>(j), val});
        }
    }
    p.set_objective_constant(obj_constant);
    for (auto& pr : pending) {
        if (!pr.has_range) {
            p.add_constraint(pr.name, pr.terms, pr.sense, pr.rhs);
            continue;
        }
        double lo, hi;
        double r = pr.range;
        switch (pr.sense) {
            case Sense::LessEqual:
                hi = pr.rhs;
                lo = pr.rhs - std::abs(r);
                break;
            case Sense::GreaterEqual:
                lo = pr.rhs;
                hi = pr.rhs + std::abs(r);
                break;
            case Sense::Equal:
                lo = r >= 0 ? pr.rhs : pr.rhs + r;
                hi = r >= 0 ? pr.rhs + r : pr.rhs;
                break;
            default:
                lo = hi = pr.rhs;
        }
        p.add_constraint(pr.name, pr.terms, Sense::LessEqual, hi);
        p.add_constraint(pr.name + "~rng", pr.terms, Sense::GreaterEqual, lo);
    }
    return p;
}

}  // namespace wen::milp

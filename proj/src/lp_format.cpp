#include "lrcvar/lp.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace lrcvar {
namespace {

constexpr std::size_t kLineWidth = 200;

void write_terms(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& terms,
                 const LinearProgram& lp, std::size_t indent) {
    std::size_t width = indent;
    bool first = true;
    for (const auto& [var, coef] : terms) {
        if (coef == 0.0) continue;
        std::ostringstream item;
        item << std::setprecision(17);
        if (first) {
            item << (coef < 0 ? "-" : "") << std::abs(coef) << ' ' << lp.variables()[var].name;
        } else {
            item << (coef < 0 ? " - " : " + ") << std::abs(coef) << ' ' << lp.variables()[var].name;
        }
        const std::string s = item.str();
        if (width + s.size() > kLineWidth) {
            out << "\n   ";
            width = 3;
        }
        out << s;
        width += s.size();
        first = false;
    }
    if (first) out << "0 " << lp.variables().front().name;
}

} // namespace

void write_lp_format(const LinearProgram& lp, std::ostream& out, const std::string& title) {
    out << std::setprecision(17);
    if (!title.empty()) out << "\\ " << title << '\n';
    out << (lp.sense() == Sense::maximize ? "Maximize" : "Minimize") << "\n obj: ";
    std::vector<std::pair<std::size_t, double>> obj;
    for (std::size_t v = 0; v < lp.n_variables(); ++v) obj.emplace_back(v, lp.objective()[v]);
    write_terms(out, obj, lp, 6);
    if (lp.objective_offset() != 0.0) {
        out << (lp.objective_offset() < 0 ? " - " : " + ") << std::abs(lp.objective_offset());
    }
    out << "\nSubject To\n";
    for (const auto& c : lp.constraints()) {
        out << ' ' << c.name << ": ";
        std::vector<std::pair<std::size_t, double>> terms;
        for (const auto& t : c.terms) terms.emplace_back(t.var, t.coef);
        write_terms(out, terms, lp, c.name.size() + 3);
        switch (c.relation) {
        case Relation::le:
            out << " <= ";
            break;
        case Relation::ge:
            out << " >= ";
            break;
        case Relation::eq:
            out << " = ";
            break;
        }
        out << c.rhs << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : lp.variables()) {
        const bool lo = std::isfinite(v.lower);
        const bool hi = std::isfinite(v.upper);
        if (!lo && !hi) {
            out << ' ' << v.name << " free\n";
        } else if (lo && hi) {
            out << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
        } else if (lo) {
            // 0 is the format's default lower bound
            if (v.lower != 0.0) out << ' ' << v.name << " >= " << v.lower << '\n';
        } else {
            out << " -inf <= " << v.name << " <= " << v.upper << '\n';
        }
    }
    out << "End\n";
}

std::string to_lp_format(const LinearProgram& lp, const std::string& title) {
    std::ostringstream out;
    write_lp_format(lp, out, title);
    return out.str();
}

} // namespace lrcvar

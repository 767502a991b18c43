#include "dispersal/prism/export.h"

#include <sstream>

namespace dispersal::prism {

namespace {

std::string update(const mdp::Branch& branch) {
    if (branch.assignments.empty()) return "true";
    std::string out;
    for (const auto& a : branch.assignments) {
        if (!out.empty()) out += " & ";
        out += "(" + a.variable + "'=" + a.value.to_string() + ")";
    }
    return out;
}

void write_module(std::ostream& out, const mdp::Module& mod) {
    out << "module " << mod.name << "\n";
    for (const auto& v : mod.variables)
        out << "  " << v.name << " : [" << v.low << ".." << v.high << "] init " << v.init << ";\n";
    if (!mod.variables.empty()) out << "\n";
    for (const auto& t : mod.templates) {
        out << "  [" << t.action << "] " << t.guard.to_string() << " -> ";
        if (t.branches.size() == 1 && t.branches.front().probability == 1) {
            out << update(t.branches.front());
        } else {
            for (std::size_t i = 0; i < t.branches.size(); ++i) {
                if (i > 0) out << " + ";
                out << to_string(t.branches[i].probability) << ":" << update(t.branches[i]);
            }
        }
        out << ";\n";
    }
    out << "endmodule\n";
}

}  // namespace

std::string export_prism(const models::ModelProgram& program) {
    std::ostringstream out;
    out << "mdp\n\n";
    const auto constants = program.constants();
    for (const auto& [name, value] : constants) out << "const int " << name << " = " << value << ";\n";
    if (!constants.empty()) out << "\n";
    for (const auto& mod : program.modules) {
        write_module(out, mod);
        out << "\n";
    }
    for (const auto& l : program.labels) out << "label \"" << l.name << "\" = " << l.condition.to_string() << ";\n";
    return out.str();
}

std::string export_prism(const models::ModelParams& params, models::Attacker attacker, models::ClientKind client) {
    return export_prism(models::build_program(params, attacker, client));
}

}  // namespace dispersal::prism

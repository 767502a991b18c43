#include "dispersal/mdp/expr.h"

#include <cassert>

#include "dispersal/errors.h"

namespace dispersal::mdp {

struct Expr::Node {
    Op op;
    int value = 0;
    std::string name;
    Expr lhs_expr{nullptr};
    Expr rhs_expr{nullptr};
};

namespace {

// PRISM operator precedence, higher binds tighter.
int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Or: return 1;
        case Expr::Op::And: return 2;
        case Expr::Op::Eq:
        case Expr::Op::Ne:
        case Expr::Op::Lt:
        case Expr::Op::Le:
        case Expr::Op::Gt:
        case Expr::Op::Ge: return 3;
        case Expr::Op::Add:
        case Expr::Op::Sub: return 4;
        case Expr::Op::Not: return 5;
        default: return 6;
    }
}

const char* symbol(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add: return "+";
        case Expr::Op::Sub: return "-";
        case Expr::Op::Eq: return "=";
        case Expr::Op::Ne: return "!=";
        case Expr::Op::Lt: return "<";
        case Expr::Op::Le: return "<=";
        case Expr::Op::Gt: return ">";
        case Expr::Op::Ge: return ">=";
        case Expr::Op::And: return " & ";
        case Expr::Op::Or: return " | ";
        default: return "?";
    }
}

}  // namespace

Expr::Expr() : Expr(boolean(true)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::literal(int value) { return Expr(std::make_shared<const Node>(Node{Op::Literal, value, {}})); }

Expr Expr::boolean(bool value) { return Expr(std::make_shared<const Node>(Node{Op::Boolean, value ? 1 : 0, {}})); }

Expr Expr::param(std::string name, int value) {
    return Expr(std::make_shared<const Node>(Node{Op::Param, value, std::move(name)}));
}

Expr Expr::var(std::string name) { return Expr(std::make_shared<const Node>(Node{Op::Var, 0, std::move(name)})); }

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
    // Fold `true & e` so generated guards stay readable.
    if (op == Op::And) {
        if (lhs.is_true()) return rhs;
        if (rhs.is_true()) return lhs;
    }
    return Expr(std::make_shared<const Node>(Node{op, 0, {}, std::move(lhs), std::move(rhs)}));
}

Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const Node>(Node{Op::Not, 0, {}, std::move(operand), Expr(nullptr)}));
}

Expr::Op Expr::op() const { return node_->op; }
int Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs_expr; }
const Expr& Expr::rhs() const { return node_->rhs_expr; }

bool Expr::is_true() const { return node_ && node_->op == Op::Boolean && node_->value == 1; }

std::string Expr::to_string() const {
    const Node& n = *node_;
    switch (n.op) {
        case Op::Literal: return std::to_string(n.value);
        case Op::Boolean: return n.value ? "true" : "false";
        case Op::Param:
        case Op::Var: return n.name;
        case Op::Not: {
            std::string inner = n.lhs_expr.to_string();
            if (precedence(n.lhs_expr.op()) < precedence(Op::Not)) inner = "(" + inner + ")";
            return "!" + inner;
        }
        default: {
            int p = precedence(n.op);
            std::string l = n.lhs_expr.to_string();
            std::string r = n.rhs_expr.to_string();
            if (precedence(n.lhs_expr.op()) < p) l = "(" + l + ")";
            // Subtraction and comparisons are not associative on the right.
            bool right_assoc_safe = n.op == Op::Add || n.op == Op::And || n.op == Op::Or;
            int rp = precedence(n.rhs_expr.op());
            if (rp < p || (rp == p && !right_assoc_safe)) r = "(" + r + ")";
            return l + symbol(n.op) + r;
        }
    }
}

void Expr::collect_variables(std::set<std::string>& out) const {
    const Node& n = *node_;
    if (n.op == Op::Var) out.insert(n.name);
    if (n.lhs_expr.node_) n.lhs_expr.collect_variables(out);
    if (n.rhs_expr.node_) n.rhs_expr.collect_variables(out);
}

void Expr::collect_params(std::vector<std::pair<std::string, int>>& out) const {
    const Node& n = *node_;
    if (n.op == Op::Param) {
        bool seen = false;
        for (const auto& [name, value] : out) seen = seen || name == n.name;
        if (!seen) out.emplace_back(n.name, n.value);
    }
    if (n.lhs_expr.node_) n.lhs_expr.collect_params(out);
    if (n.rhs_expr.node_) n.rhs_expr.collect_params(out);
}

Expr operator+(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Add, std::move(lhs), std::move(rhs)); }
Expr operator-(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Sub, std::move(lhs), std::move(rhs)); }
Expr operator+(Expr lhs, int rhs) { return std::move(lhs) + Expr::literal(rhs); }
Expr operator-(Expr lhs, int rhs) { return std::move(lhs) - Expr::literal(rhs); }
Expr operator&&(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::And, std::move(lhs), std::move(rhs)); }
Expr operator||(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Or, std::move(lhs), std::move(rhs)); }
Expr operator!(Expr operand) { return Expr::negate(std::move(operand)); }

Expr eq(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Eq, std::move(lhs), std::move(rhs)); }
Expr ne(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Ne, std::move(lhs), std::move(rhs)); }
Expr lt(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Lt, std::move(lhs), std::move(rhs)); }
Expr le(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Le, std::move(lhs), std::move(rhs)); }
Expr gt(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Gt, std::move(lhs), std::move(rhs)); }
Expr ge(Expr lhs, Expr rhs) { return Expr::binary(Expr::Op::Ge, std::move(lhs), std::move(rhs)); }
Expr eq(Expr lhs, int rhs) { return eq(std::move(lhs), Expr::literal(rhs)); }
Expr lt(Expr lhs, int rhs) { return lt(std::move(lhs), Expr::literal(rhs)); }
Expr ge(Expr lhs, int rhs) { return ge(std::move(lhs), Expr::literal(rhs)); }

void CompiledExpr::check_depth() const {
    int depth = 0;
    for (const Instr& in : code_) {
        if (in.op == Expr::Op::Literal || in.op == Expr::Op::Var)
            ++depth;
        else if (in.op != Expr::Op::Not)
            --depth;
        if (depth > kMaxDepth) throw ModelError("expression nesting too deep to evaluate");
    }
}

int CompiledExpr::eval(std::span<const int> values) const {
    int stack[kMaxDepth];
    int top = 0;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Expr::Op::Literal: stack[top++] = in.arg; break;
            case Expr::Op::Var: stack[top++] = values[static_cast<std::size_t>(in.arg)]; break;
            case Expr::Op::Not: stack[top - 1] = !stack[top - 1]; break;
            default: {
                int r = stack[--top];
                int& l = stack[top - 1];
                switch (in.op) {
                    case Expr::Op::Add: l = l + r; break;
                    case Expr::Op::Sub: l = l - r; break;
                    case Expr::Op::Eq: l = l == r; break;
                    case Expr::Op::Ne: l = l != r; break;
                    case Expr::Op::Lt: l = l < r; break;
                    case Expr::Op::Le: l = l <= r; break;
                    case Expr::Op::Gt: l = l > r; break;
                    case Expr::Op::Ge: l = l >= r; break;
                    case Expr::Op::And: l = l && r; break;
                    case Expr::Op::Or: l = l || r; break;
                    default: assert(false);
                }
            }
        }
    }
    return stack[0];
}

}  // namespace dispersal::mdp

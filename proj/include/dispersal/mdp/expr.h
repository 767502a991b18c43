#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dispersal::mdp {

/// Integer/boolean expression over model variables, printable in PRISM syntax.
///
/// Booleans are integers 0/1. Named parameters evaluate to a fixed value but print
/// by name, so exported guards read `ctr_c < n` rather than `ctr_c < 4`.
class Expr {
  public:
    enum class Op { Literal, Boolean, Param, Var, Add, Sub, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Not };

    Expr();  // `true`

    static Expr literal(int value);
    static Expr boolean(bool value);
    static Expr param(std::string name, int value);
    static Expr var(std::string name);
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr negate(Expr operand);

    Op op() const;
    int value() const;                // Literal, Boolean, Param
    const std::string& name() const;  // Param, Var
    const Expr& lhs() const;
    const Expr& rhs() const;

    bool is_true() const;

    std::string to_string() const;
    void collect_variables(std::set<std::string>& out) const;
    /// Named parameters with their values, in first-occurrence order.
    void collect_params(std::vector<std::pair<std::string, int>>& out) const;

  private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);
Expr operator+(Expr lhs, int rhs);
Expr operator-(Expr lhs, int rhs);
Expr operator&&(Expr lhs, Expr rhs);
Expr operator||(Expr lhs, Expr rhs);
Expr operator!(Expr operand);

Expr eq(Expr lhs, Expr rhs);
Expr ne(Expr lhs, Expr rhs);
Expr lt(Expr lhs, Expr rhs);
Expr le(Expr lhs, Expr rhs);
Expr gt(Expr lhs, Expr rhs);
Expr ge(Expr lhs, Expr rhs);
Expr eq(Expr lhs, int rhs);
Expr lt(Expr lhs, int rhs);
Expr ge(Expr lhs, int rhs);

/// An Expr with variable names resolved to slots, flattened to postfix for fast evaluation.
class CompiledExpr {
  public:
    /// `slot_of` maps a variable name to its index; throws ModelError on unknown names.
    template <typename Resolver>
    static CompiledExpr compile(const Expr& expr, Resolver&& slot_of) {
        CompiledExpr out;
        out.emit(expr, slot_of);
        out.check_depth();
        return out;
    }

    int eval(std::span<const int> values) const;

    static constexpr int kMaxDepth = 64;

  private:
    void check_depth() const;

    struct Instr {
        Expr::Op op;
        int arg;
    };

    template <typename Resolver>
    void emit(const Expr& e, Resolver& slot_of) {
        switch (e.op()) {
            case Expr::Op::Literal:
            case Expr::Op::Boolean:
            case Expr::Op::Param:
                code_.push_back({Expr::Op::Literal, e.value()});
                return;
            case Expr::Op::Var:
                code_.push_back({Expr::Op::Var, slot_of(e.name())});
                return;
            case Expr::Op::Not:
                emit(e.lhs(), slot_of);
                code_.push_back({Expr::Op::Not, 0});
                return;
            default:
                emit(e.lhs(), slot_of);
                emit(e.rhs(), slot_of);
                code_.push_back({e.op(), 0});
                return;
        }
    }

    std::vector<Instr> code_;
};

}  // namespace dispersal::mdp

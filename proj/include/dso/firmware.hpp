#ifndef DSO_FIRMWARE_HPP
#define DSO_FIRMWARE_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dso/model.hpp"

namespace dso {

// The perturbation function of a team is an arithmetic expression over
// search-context vectors, parsed from a source string and interpreted per
// candidate generation.
//
// Grammar (whitespace-insensitive, left-associative, unary minus binds
// tightest, then * /, then + -):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | terminal | '(' expr ')'
//
// Terminals: x (drone coordinate), tb (team best), gb (global best),
// r1, r2 (two distinct random drones), U (fresh uniform [0,1) vector per
// occurrence), N (fresh standard-normal vector per occurrence), C1, C2, C3
// (configuration constants), and decimal literals in [-10, 10].

enum class binary_op { add, sub, mul, div };

enum class terminal_kind {
    coord_x,
    team_best,
    global_best,
    rand1,
    rand2,
    uniform_draw,
    normal_draw,
    c1,
    c2,
    c3,
    literal,
};

struct expr_node {
    enum class node_kind { binary, negate, terminal };

    node_kind kind = node_kind::terminal;
    binary_op op = binary_op::add;              // kind == binary
    terminal_kind term = terminal_kind::coord_x; // kind == terminal
    double literal = 0.0;                        // term == literal
    std::unique_ptr<expr_node> left;             // binary, negate
    std::unique_ptr<expr_node> right;            // binary only
};

class firmware_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class syntax_error : public firmware_error {
public:
    syntax_error(const std::string& what, std::size_t position);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class depth_error : public firmware_error {
public:
    using firmware_error::firmware_error;
};

class literal_range_error : public firmware_error {
public:
    using firmware_error::firmware_error;
};

class expr_tree;

namespace detail {
expr_tree make_tree(std::unique_ptr<expr_node> root);
}

// Immutable expression tree. Depth is capped at 7 (root depth 1), literal
// terminals lie in [-10, 10], and a negate node never wraps a literal
// (the sign is folded into the literal so serialization round-trips).
class expr_tree {
public:
    static constexpr int depth_limit = 7;
    static constexpr double literal_bound = 10.0;

    expr_tree(const expr_tree& other);
    expr_tree(expr_tree&&) noexcept = default;
    expr_tree& operator=(const expr_tree& other);
    expr_tree& operator=(expr_tree&&) noexcept = default;

    const expr_node& root() const { return *root_; }
    int depth() const;
    std::size_t node_count() const;

    friend bool operator==(const expr_tree& a, const expr_tree& b);

private:
    friend expr_tree detail::make_tree(std::unique_ptr<expr_node> root);
    explicit expr_tree(std::unique_ptr<expr_node> root);

    std::unique_ptr<expr_node> root_;
};

// Everything a firmware evaluation can read. All coordinates share the
// problem dimension; rng feeds the U and N terminals.
struct eval_context {
    const coordinate& x;
    const coordinate& tb;
    const coordinate& gb;
    const coordinate& r1;
    const coordinate& r2;
    double c1;
    double c2;
    double c3;
    rng_engine& rng;
};

// Throws syntax_error (with position), depth_error, or literal_range_error.
expr_tree parse(std::string_view source);

// Fully parenthesized canonical form; parse(serialize(t)) is structurally
// identical to t.
std::string serialize(const expr_tree& tree);

// Componentwise vector arithmetic; scalars broadcast; division is protected
// (divisor components with magnitude < 1e-12 yield 1.0). Every U/N terminal
// occurrence draws a fresh vector from ctx.rng.
coordinate eval_expr(const expr_tree& tree, eval_context& ctx);

// Grow-method random tree (0.4 terminal / 0.6 operator per node until the
// depth budget forces terminals). Guaranteed to contain at least one
// coordinate-valued terminal. Requires 2 <= max_depth <= 7.
expr_tree random_firmware(rng_engine& rng, int max_depth);

// Replaces a uniformly chosen node's subtree with a fresh random one that
// fits the remaining depth budget. The input tree is not modified.
expr_tree mutate_firmware(const expr_tree& tree, rng_engine& rng);

// Subtree crossover: a random node of a copy of `a` is replaced by a random
// subtree of `b`. Retries up to 10 times if the depth cap would be exceeded,
// then falls back to mutate_firmware(a).
expr_tree recombine_firmware(const expr_tree& a, const expr_tree& b, rng_engine& rng);

// A firmware pairs the executable tree with the source string it was parsed
// from (or its canonical serialization when evolved). The source appears in
// run logs and reports.
struct firmware {
    expr_tree tree;
    std::string source;
};

firmware make_firmware(std::string source);
firmware make_firmware(expr_tree tree);

} // namespace dso

#endif

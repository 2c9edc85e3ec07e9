#include "dso/firmware.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

namespace dso {

namespace {

using expr_ptr = std::unique_ptr<expr_node>;

constexpr double div_guard = 1e-12;

expr_ptr make_terminal(terminal_kind term, double literal = 0.0)
{
    auto n = std::make_unique<expr_node>();
    n->kind = expr_node::node_kind::terminal;
    n->term = term;
    n->literal = literal;
    return n;
}

expr_ptr make_binary(binary_op op, expr_ptr left, expr_ptr right)
{
    auto n = std::make_unique<expr_node>();
    n->kind = expr_node::node_kind::binary;
    n->op = op;
    n->left = std::move(left);
    n->right = std::move(right);
    return n;
}

// Folds -literal into a negative literal so that serialization (which has no
// negative number tokens, only unary minus) round-trips structurally.
expr_ptr make_negate(expr_ptr child)
{
    if (child->kind == expr_node::node_kind::terminal
        && child->term == terminal_kind::literal) {
        child->literal = -child->literal;
        return child;
    }
    auto n = std::make_unique<expr_node>();
    n->kind = expr_node::node_kind::negate;
    n->left = std::move(child);
    return n;
}

expr_ptr clone(const expr_node& node)
{
    auto n = std::make_unique<expr_node>();
    n->kind = node.kind;
    n->op = node.op;
    n->term = node.term;
    n->literal = node.literal;
    if (node.left)
        n->left = clone(*node.left);
    if (node.right)
        n->right = clone(*node.right);
    return n;
}

int node_depth(const expr_node& node)
{
    int d = 0;
    if (node.left)
        d = node_depth(*node.left);
    if (node.right)
        d = std::max(d, node_depth(*node.right));
    return d + 1;
}

std::size_t count_nodes(const expr_node& node)
{
    std::size_t n = 1;
    if (node.left)
        n += count_nodes(*node.left);
    if (node.right)
        n += count_nodes(*node.right);
    return n;
}

bool structurally_equal(const expr_node& a, const expr_node& b)
{
    if (a.kind != b.kind)
        return false;
    switch (a.kind) {
    case expr_node::node_kind::terminal:
        return a.term == b.term
            && (a.term != terminal_kind::literal || a.literal == b.literal);
    case expr_node::node_kind::negate:
        return structurally_equal(*a.left, *b.left);
    case expr_node::node_kind::binary:
        return a.op == b.op && structurally_equal(*a.left, *b.left)
            && structurally_equal(*a.right, *b.right);
    }
    return false;
}

// Subtree splices can leave a literal directly under a negate; fold the sign
// back into the literal so the canonical form stays parse-stable.
void normalize_negated_literals(expr_ptr& node)
{
    if (node->left)
        normalize_negated_literals(node->left);
    if (node->right)
        normalize_negated_literals(node->right);
    if (node->kind == expr_node::node_kind::negate
        && node->left->kind == expr_node::node_kind::terminal
        && node->left->term == terminal_kind::literal) {
        node->left->literal = -node->left->literal;
        node = std::move(node->left);
    }
}

void validate(const expr_node& node)
{
    if (node.kind == expr_node::node_kind::terminal
        && node.term == terminal_kind::literal
        && !(std::abs(node.literal) <= expr_tree::literal_bound))
        throw literal_range_error("literal " + std::to_string(node.literal)
                                  + " outside [-10, 10]");
    if (node.left)
        validate(*node.left);
    if (node.right)
        validate(*node.right);
}

} // namespace

syntax_error::syntax_error(const std::string& what, std::size_t position)
    : firmware_error(what + " at position " + std::to_string(position)),
      position_(position)
{
}

expr_tree::expr_tree(std::unique_ptr<expr_node> root) : root_(std::move(root)) {}

expr_tree::expr_tree(const expr_tree& other) : root_(clone(*other.root_)) {}

expr_tree& expr_tree::operator=(const expr_tree& other)
{
    if (this != &other)
        root_ = clone(*other.root_);
    return *this;
}

int expr_tree::depth() const
{
    return node_depth(*root_);
}

std::size_t expr_tree::node_count() const
{
    return count_nodes(*root_);
}

bool operator==(const expr_tree& a, const expr_tree& b)
{
    return structurally_equal(*a.root_, *b.root_);
}

namespace detail {

expr_tree make_tree(std::unique_ptr<expr_node> root)
{
    assert(root);
    normalize_negated_literals(root);
    const int d = node_depth(*root);
    if (d > expr_tree::depth_limit)
        throw depth_error("expression depth " + std::to_string(d) + " exceeds "
                          + std::to_string(expr_tree::depth_limit));
    validate(*root);
    return expr_tree(std::move(root));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Parsing

namespace {

class parser {
public:
    explicit parser(std::string_view src) : src_(src) {}

    expr_ptr run()
    {
        auto e = parse_expr();
        skip_ws();
        if (pos_ != src_.size())
            throw syntax_error("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
    }

    bool eat(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    expr_ptr parse_expr()
    {
        auto lhs = parse_term();
        for (;;) {
            if (eat('+'))
                lhs = make_binary(binary_op::add, std::move(lhs), parse_term());
            else if (eat('-'))
                lhs = make_binary(binary_op::sub, std::move(lhs), parse_term());
            else
                return lhs;
        }
    }

    expr_ptr parse_term()
    {
        auto lhs = parse_unary();
        for (;;) {
            if (eat('*'))
                lhs = make_binary(binary_op::mul, std::move(lhs), parse_unary());
            else if (eat('/'))
                lhs = make_binary(binary_op::div, std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    expr_ptr parse_unary()
    {
        if (eat('-'))
            return make_negate(parse_unary());
        return parse_primary();
    }

    expr_ptr parse_primary()
    {
        skip_ws();
        if (pos_ >= src_.size())
            throw syntax_error("unexpected end of input", pos_);

        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = parse_expr();
            if (!eat(')'))
                throw syntax_error("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_identifier();
        throw syntax_error("unexpected '" + std::string(1, c) + "'", pos_);
    }

    expr_ptr parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size()
                       && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // 'e' belongs to something else; not ours
            }
        }

        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_)
            throw syntax_error("malformed number", start);
        if (!(std::abs(value) <= expr_tree::literal_bound))
            throw literal_range_error("literal "
                                      + std::string(src_.substr(start, pos_ - start))
                                      + " outside [-10, 10]");
        return make_terminal(terminal_kind::literal, value);
    }

    expr_ptr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size()
               && (std::isalnum(static_cast<unsigned char>(src_[pos_]))))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name == "x")
            return make_terminal(terminal_kind::coord_x);
        if (name == "tb")
            return make_terminal(terminal_kind::team_best);
        if (name == "gb")
            return make_terminal(terminal_kind::global_best);
        if (name == "r1")
            return make_terminal(terminal_kind::rand1);
        if (name == "r2")
            return make_terminal(terminal_kind::rand2);
        if (name == "U")
            return make_terminal(terminal_kind::uniform_draw);
        if (name == "N")
            return make_terminal(terminal_kind::normal_draw);
        if (name == "C1")
            return make_terminal(terminal_kind::c1);
        if (name == "C2")
            return make_terminal(terminal_kind::c2);
        if (name == "C3")
            return make_terminal(terminal_kind::c3);
        throw syntax_error("unknown terminal '" + std::string(name) + "'", start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

} // namespace

expr_tree parse(std::string_view source)
{
    return detail::make_tree(parser(source).run());
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string format_literal(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    assert(ec == std::errc());
    return std::string(buf, ptr);
}

void serialize_node(const expr_node& node, std::string& out)
{
    switch (node.kind) {
    case expr_node::node_kind::terminal:
        switch (node.term) {
        case terminal_kind::coord_x: out += "x"; break;
        case terminal_kind::team_best: out += "tb"; break;
        case terminal_kind::global_best: out += "gb"; break;
        case terminal_kind::rand1: out += "r1"; break;
        case terminal_kind::rand2: out += "r2"; break;
        case terminal_kind::uniform_draw: out += "U"; break;
        case terminal_kind::normal_draw: out += "N"; break;
        case terminal_kind::c1: out += "C1"; break;
        case terminal_kind::c2: out += "C2"; break;
        case terminal_kind::c3: out += "C3"; break;
        case terminal_kind::literal: out += format_literal(node.literal); break;
        }
        break;
    case expr_node::node_kind::negate:
        out += "(-";
        serialize_node(*node.left, out);
        out += ")";
        break;
    case expr_node::node_kind::binary: {
        out += "(";
        serialize_node(*node.left, out);
        switch (node.op) {
        case binary_op::add: out += " + "; break;
        case binary_op::sub: out += " - "; break;
        case binary_op::mul: out += " * "; break;
        case binary_op::div: out += " / "; break;
        }
        serialize_node(*node.right, out);
        out += ")";
        break;
    }
    }
}

} // namespace

std::string serialize(const expr_tree& tree)
{
    std::string out;
    serialize_node(tree.root(), out);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

coordinate eval_node(const expr_node& node, eval_context& ctx, std::size_t dim)
{
    switch (node.kind) {
    case expr_node::node_kind::terminal:
        switch (node.term) {
        case terminal_kind::coord_x: return ctx.x;
        case terminal_kind::team_best: return ctx.tb;
        case terminal_kind::global_best: return ctx.gb;
        case terminal_kind::rand1: return ctx.r1;
        case terminal_kind::rand2: return ctx.r2;
        case terminal_kind::uniform_draw: {
            coordinate v(dim);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (auto& c : v)
                c = u(ctx.rng);
            return v;
        }
        case terminal_kind::normal_draw: {
            coordinate v(dim);
            std::normal_distribution<double> n(0.0, 1.0);
            for (auto& c : v)
                c = n(ctx.rng);
            return v;
        }
        case terminal_kind::c1: return coordinate(dim, ctx.c1);
        case terminal_kind::c2: return coordinate(dim, ctx.c2);
        case terminal_kind::c3: return coordinate(dim, ctx.c3);
        case terminal_kind::literal: return coordinate(dim, node.literal);
        }
        break;
    case expr_node::node_kind::negate: {
        coordinate v = eval_node(*node.left, ctx, dim);
        for (auto& c : v)
            c = -c;
        return v;
    }
    case expr_node::node_kind::binary: {
        coordinate l = eval_node(*node.left, ctx, dim);
        const coordinate r = eval_node(*node.right, ctx, dim);
        switch (node.op) {
        case binary_op::add:
            for (std::size_t i = 0; i < dim; ++i) l[i] += r[i];
            break;
        case binary_op::sub:
            for (std::size_t i = 0; i < dim; ++i) l[i] -= r[i];
            break;
        case binary_op::mul:
            for (std::size_t i = 0; i < dim; ++i) l[i] *= r[i];
            break;
        case binary_op::div:
            for (std::size_t i = 0; i < dim; ++i)
                l[i] = std::abs(r[i]) < div_guard ? 1.0 : l[i] / r[i];
            break;
        }
        return l;
    }
    }
    return {};
}

} // namespace

coordinate eval_expr(const expr_tree& tree, eval_context& ctx)
{
    const std::size_t dim = ctx.x.size();
    assert(ctx.tb.size() == dim && ctx.gb.size() == dim && ctx.r1.size() == dim
           && ctx.r2.size() == dim);
    return eval_node(tree.root(), ctx, dim);
}

// ---------------------------------------------------------------------------
// Random generation, mutation, crossover

namespace {

bool contains_coordinate(const expr_node& node)
{
    if (node.kind == expr_node::node_kind::terminal)
        return node.term == terminal_kind::coord_x || node.term == terminal_kind::team_best
            || node.term == terminal_kind::global_best || node.term == terminal_kind::rand1
            || node.term == terminal_kind::rand2;
    if (node.left && contains_coordinate(*node.left))
        return true;
    return node.right && contains_coordinate(*node.right);
}

expr_ptr random_terminal(rng_engine& rng)
{
    static constexpr terminal_kind kinds[] = {
        terminal_kind::coord_x,     terminal_kind::team_best, terminal_kind::global_best,
        terminal_kind::rand1,       terminal_kind::rand2,     terminal_kind::uniform_draw,
        terminal_kind::normal_draw, terminal_kind::c1,        terminal_kind::c2,
        terminal_kind::c3,          terminal_kind::literal,
    };
    const auto k = kinds[std::uniform_int_distribution<std::size_t>(0, 10)(rng)];
    if (k == terminal_kind::literal) {
        const double v = std::uniform_real_distribution<double>(
            -expr_tree::literal_bound, expr_tree::literal_bound)(rng);
        return make_terminal(k, v);
    }
    return make_terminal(k);
}

expr_ptr grow(rng_engine& rng, int budget)
{
    if (budget <= 1
        || std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.4)
        return random_terminal(rng);

    // 4 binary operators + negation, uniform
    const int pick = std::uniform_int_distribution<int>(0, 4)(rng);
    if (pick == 4)
        return make_negate(grow(rng, budget - 1));
    auto left = grow(rng, budget - 1);
    auto right = grow(rng, budget - 1);
    return make_binary(static_cast<binary_op>(pick), std::move(left), std::move(right));
}

// Grow with the coordinate-terminal guarantee: up to 10 regenerations, then
// a one-level-shorter tree grafted onto "+ x" (keeps the depth budget).
expr_ptr grow_with_coordinate(rng_engine& rng, int budget)
{
    for (int attempt = 0; attempt < 10; ++attempt) {
        auto t = grow(rng, budget);
        if (contains_coordinate(*t))
            return t;
    }
    auto t = grow(rng, budget - 1);
    return make_binary(binary_op::add, std::move(t),
                       make_terminal(terminal_kind::coord_x));
}

// Owning slots of every node in preorder; slot 0 is the root.
void collect_slots(expr_ptr& slot, int depth, std::vector<std::pair<expr_ptr*, int>>& out)
{
    out.emplace_back(&slot, depth);
    if (slot->left)
        collect_slots(slot->left, depth + 1, out);
    if (slot->right)
        collect_slots(slot->right, depth + 1, out);
}

void collect_nodes(const expr_node& node, std::vector<const expr_node*>& out)
{
    out.push_back(&node);
    if (node.left)
        collect_nodes(*node.left, out);
    if (node.right)
        collect_nodes(*node.right, out);
}

} // namespace

expr_tree random_firmware(rng_engine& rng, int max_depth)
{
    if (max_depth < 2 || max_depth > expr_tree::depth_limit)
        throw std::invalid_argument("random_firmware: max_depth must be in [2, 7], got "
                                    + std::to_string(max_depth));
    return detail::make_tree(grow_with_coordinate(rng, max_depth));
}

expr_tree mutate_firmware(const expr_tree& tree, rng_engine& rng)
{
    expr_ptr copy = clone(tree.root());

    std::vector<std::pair<expr_ptr*, int>> slots;
    collect_slots(copy, 1, slots);
    const auto pick = std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng);
    auto [slot, depth] = slots[pick];

    const int budget = expr_tree::depth_limit - depth + 1;
    *slot = budget >= 2 ? grow_with_coordinate(rng, budget) : random_terminal(rng);
    return detail::make_tree(std::move(copy));
}

expr_tree recombine_firmware(const expr_tree& a, const expr_tree& b, rng_engine& rng)
{
    std::vector<const expr_node*> donors;
    collect_nodes(b.root(), donors);

    for (int attempt = 0; attempt < 10; ++attempt) {
        expr_ptr copy = clone(a.root());
        std::vector<std::pair<expr_ptr*, int>> slots;
        collect_slots(copy, 1, slots);

        const auto i = std::uniform_int_distribution<std::size_t>(0, slots.size() - 1)(rng);
        const auto j = std::uniform_int_distribution<std::size_t>(0, donors.size() - 1)(rng);
        *slots[i].first = clone(*donors[j]);

        if (node_depth(*copy) <= expr_tree::depth_limit)
            return detail::make_tree(std::move(copy));
    }
    return mutate_firmware(a, rng);
}

firmware make_firmware(std::string source)
{
    expr_tree tree = parse(source);
    return firmware{std::move(tree), std::move(source)};
}

firmware make_firmware(expr_tree tree)
{
    std::string source = serialize(tree);
    return firmware{std::move(tree), std::move(source)};
}

} // namespace dso

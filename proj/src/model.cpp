#include "wfsat/model.hpp"

#include "wfsat/error.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace wfsat {

std::vector<ElementIndex> indices_of(ElementMask m)
{
    std::vector<ElementIndex> out;
    out.reserve(count(m));
    for_each_bit(m, [&](ElementIndex i) { out.push_back(i); });
    return out;
}

CompositionNode::CompositionNode(NodeKind kind, std::string id, NodePtr left, NodePtr right)
    : kind_(kind), id_(std::move(id)), left_(std::move(left)), right_(std::move(right))
{
}

NodePtr CompositionNode::step(std::string id)
{
    return std::make_shared<const CompositionNode>(NodeKind::step, std::move(id), nullptr, nullptr);
}

NodePtr CompositionNode::release(std::string id)
{
    return std::make_shared<const CompositionNode>(NodeKind::release, std::move(id), nullptr, nullptr);
}

NodePtr CompositionNode::seq(NodePtr left, NodePtr right)
{
    return std::make_shared<const CompositionNode>(NodeKind::seq, std::string{}, std::move(left), std::move(right));
}

NodePtr CompositionNode::par(NodePtr left, NodePtr right)
{
    return std::make_shared<const CompositionNode>(NodeKind::par, std::string{}, std::move(left), std::move(right));
}

NodePtr CompositionNode::choice(NodePtr left, NodePtr right)
{
    return std::make_shared<const CompositionNode>(NodeKind::choice, std::string{}, std::move(left),
                                                   std::move(right));
}

NodePtr CompositionNode::fold(NodeKind kind, std::vector<NodePtr> children)
{
    if (children.empty()) {
        throw std::invalid_argument("composition needs at least one child");
    }
    if (kind == NodeKind::step || kind == NodeKind::release) {
        throw std::invalid_argument("cannot fold leaf kinds");
    }
    NodePtr acc = std::move(children.front());
    for (std::size_t i = 1; i < children.size(); ++i) {
        acc = std::make_shared<const CompositionNode>(kind, std::string{}, std::move(acc), std::move(children[i]));
    }
    return acc;
}

bool has_choice(const CompositionNode& node)
{
    if (node.is_leaf()) {
        return false;
    }
    return node.kind() == NodeKind::choice || has_choice(*node.left()) || has_choice(*node.right());
}

std::size_t count_choices(const CompositionNode& node)
{
    if (node.is_leaf()) {
        return 0;
    }
    return (node.kind() == NodeKind::choice ? 1 : 0) + count_choices(*node.left()) + count_choices(*node.right());
}

std::optional<ElementIndex> ElementTable::find(std::string_view id) const
{
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) {
            return i;
        }
    }
    return std::nullopt;
}

ElementMask ElementTable::steps() const
{
    ElementMask m = 0;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        if (kinds[i] == ElementKind::step) {
            m |= bit(i);
        }
    }
    return m;
}

ElementMask ElementTable::releases() const
{
    return all() & ~steps();
}

ElementMask ElementTable::all() const
{
    return size() >= kMaxElements ? ~ElementMask{0} : bit(size()) - 1;
}

namespace {

void collect_leaves(const CompositionNode& node, ElementTable& table)
{
    if (node.is_leaf()) {
        if (table.size() == kMaxElements) {
            throw SizeLimit("workflow has more than " + std::to_string(kMaxElements) + " steps and release points");
        }
        table.ids.push_back(node.id());
        table.kinds.push_back(node.kind() == NodeKind::step ? ElementKind::step : ElementKind::release);
        return;
    }
    collect_leaves(*node.left(), table);
    collect_leaves(*node.right(), table);
}

ElementIndex resolve(const CompositionNode& leaf, const ElementTable& table)
{
    const auto idx = table.find(leaf.id());
    if (!idx) {
        throw std::invalid_argument("element '" + leaf.id() + "' is not in the element table");
    }
    return *idx;
}

ElementMask build_order(const CompositionNode& node, const ElementTable& table, std::vector<ElementMask>& succ)
{
    switch (node.kind()) {
    case NodeKind::step:
    case NodeKind::release:
        return bit(resolve(node, table));
    case NodeKind::seq: {
        const ElementMask l = build_order(*node.left(), table, succ);
        const ElementMask r = build_order(*node.right(), table, succ);
        for_each_bit(l, [&](ElementIndex i) { succ[i] |= r; });
        return l | r;
    }
    case NodeKind::par:
        return build_order(*node.left(), table, succ) | build_order(*node.right(), table, succ);
    case NodeKind::choice:
        break;
    }
    throw XorPresent("compile_poset requires an xor-free workflow");
}

void collect_exclusive(const CompositionNode& node, const ElementTable& table,
                       std::set<std::pair<ElementIndex, ElementIndex>>& out)
{
    if (node.is_leaf()) {
        return;
    }
    if (node.kind() == NodeKind::choice) {
        const ElementMask l = leaves_of(*node.left(), table);
        const ElementMask r = leaves_of(*node.right(), table);
        for_each_bit(l, [&](ElementIndex a) {
            for_each_bit(r, [&](ElementIndex b) { out.emplace(std::min(a, b), std::max(a, b)); });
        });
    }
    collect_exclusive(*node.left(), table, out);
    collect_exclusive(*node.right(), table, out);
}

} // namespace

ElementTable index_elements(const CompositionNode& root)
{
    ElementTable table;
    collect_leaves(root, table);
    return table;
}

ElementMask leaves_of(const CompositionNode& node, const ElementTable& table)
{
    if (node.is_leaf()) {
        return bit(resolve(node, table));
    }
    return leaves_of(*node.left(), table) | leaves_of(*node.right(), table);
}

Poset::Poset(ElementMask members, std::vector<ElementMask> successors)
    : members_(members), successors_(std::move(successors))
{
}

ElementMask Poset::predecessors(ElementIndex i) const
{
    ElementMask m = 0;
    for_each_bit(members_, [&](ElementIndex j) {
        if (contains(successors_[j], i)) {
            m |= bit(j);
        }
    });
    return m;
}

bool Poset::is_linear_extension(const std::vector<ElementIndex>& order) const
{
    ElementMask seen = 0;
    for (ElementIndex e : order) {
        if (e >= successors_.size() || !contains(members_, e) || contains(seen, e)) {
            return false;
        }
        // Nothing already placed may be required to come after e.
        if ((successors_[e] & seen) != 0) {
            return false;
        }
        seen |= bit(e);
    }
    return seen == members_;
}

Poset compile_poset(const CompositionNode& node, const ElementTable& table)
{
    std::vector<ElementMask> succ(table.size(), 0);
    const ElementMask members = build_order(node, table, succ);
    return Poset(members, std::move(succ));
}

std::set<std::pair<ElementIndex, ElementIndex>> exclusive_pairs(const CompositionNode& node,
                                                               const ElementTable& table)
{
    std::set<std::pair<ElementIndex, ElementIndex>> out;
    collect_exclusive(node, table, out);
    return out;
}

std::string_view to_string(ConstraintKind kind) noexcept
{
    switch (kind) {
    case ConstraintKind::sod:
        return "sod";
    case ConstraintKind::bod:
        return "bod";
    case ConstraintKind::at_most:
        return "atmost";
    case ConstraintKind::at_least:
        return "atleast";
    }
    return "?";
}

std::optional<ConstraintKind> constraint_kind_from(std::string_view text) noexcept
{
    if (text == "sod") {
        return ConstraintKind::sod;
    }
    if (text == "bod") {
        return ConstraintKind::bod;
    }
    if (text == "atmost") {
        return ConstraintKind::at_most;
    }
    if (text == "atleast") {
        return ConstraintKind::at_least;
    }
    return std::nullopt;
}

Schema Schema::create(NodePtr workflow, std::vector<std::string> users)
{
    Schema s;
    s.elements = index_elements(*workflow);
    s.workflow = std::move(workflow);
    s.users = std::move(users);
    s.authorized.assign(s.elements.size(), std::vector<bool>(s.users.size(), false));
    return s;
}

ElementIndex Schema::element(std::string_view id) const
{
    if (auto idx = elements.find(id)) {
        return *idx;
    }
    throw std::out_of_range("unknown element '" + std::string(id) + "'");
}

UserIndex Schema::user(std::string_view id) const
{
    const auto it = std::find(users.begin(), users.end(), id);
    if (it == users.end()) {
        throw std::out_of_range("unknown user '" + std::string(id) + "'");
    }
    return static_cast<UserIndex>(it - users.begin());
}

void Schema::authorize(std::string_view step, std::string_view u)
{
    authorized.at(element(step)).at(user(u)) = true;
}

std::int64_t Schema::penalty(ElementIndex step) const
{
    const auto it = step_unauth_penalty.find(step);
    return it == step_unauth_penalty.end() ? default_unauth_penalty : it->second;
}

ElementMask Schema::mask_of(const std::vector<std::string>& ids) const
{
    ElementMask m = 0;
    for (const auto& id : ids) {
        m |= bit(element(id));
    }
    return m;
}

bool ValidationReport::has(std::string_view code) const
{
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i > 0) {
            os << "; ";
        }
        os << v.code << ": " << v.message;
        if (!v.ids.empty()) {
            os << " [";
            for (std::size_t j = 0; j < v.ids.size(); ++j) {
                os << (j ? ", " : "") << v.ids[j];
            }
            os << "]";
        }
    }
    return os.str();
}

namespace {

std::vector<std::string> ids_of(const Schema& schema, ElementMask m)
{
    std::vector<std::string> out;
    for_each_bit(m, [&](ElementIndex i) {
        if (i < schema.elements.size()) {
            out.push_back(schema.elements.ids[i]);
        } else {
            out.push_back("#" + std::to_string(i));
        }
    });
    return out;
}

} // namespace

ValidationReport validate_schema(const Schema& schema)
{
    ValidationReport report;
    auto add = [&](std::string code, std::string message, std::vector<std::string> ids = {}) {
        report.violations.push_back({std::move(code), std::move(message), std::move(ids)});
    };

    if (!schema.workflow) {
        add("empty_workflow", "schema has no workflow");
        return report;
    }

    const ElementTable& table = schema.elements;
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (table.ids[i] == table.ids[j]) {
                add("duplicate_id", "id used by more than one leaf", {table.ids[i]});
                break;
            }
        }
    }
    if (!report.ok()) {
        // Everything below resolves ids through the table.
        return report;
    }

    for (std::size_t i = 0; i < schema.users.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (schema.users[i] == schema.users[j]) {
                add("duplicate_user", "user listed twice", {schema.users[i]});
                break;
            }
        }
    }
    if (schema.users.empty()) {
        add("no_users", "schema has no users");
    }

    bool matrix_ok = schema.authorized.size() == table.size();
    for (const auto& row : schema.authorized) {
        matrix_ok = matrix_ok && row.size() == schema.users.size();
    }
    if (!matrix_ok) {
        add("authorization_shape", "authorization matrix does not match elements x users");
    } else {
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto& row = schema.authorized[i];
            const bool any = std::find(row.begin(), row.end(), true) != row.end();
            if (table.is_step(i) && !any) {
                add("unauthorized_step", "step has no authorized user", {table.ids[i]});
            }
            if (!table.is_step(i) && any) {
                add("authorized_release", "release points cannot be authorized", {table.ids[i]});
            }
        }
    }

    if (schema.default_unauth_penalty < 0) {
        add("negative_penalty", "default unauthorized penalty is negative");
    }
    for (const auto& [step, value] : schema.step_unauth_penalty) {
        if (step >= table.size() || !table.is_step(step)) {
            add("penalty_target", "per-step penalty names a non-step", ids_of(schema, bit(step)));
        } else if (value < 0) {
            add("negative_penalty", "per-step penalty is negative", {table.ids[step]});
        }
    }

    const ElementMask steps = table.steps();
    const ElementMask releases = table.releases();
    const auto exclusive = exclusive_pairs(*schema.workflow, table);
    std::set<std::string> constraint_ids;
    for (const auto& c : schema.constraints) {
        if (!constraint_ids.insert(c.id).second) {
            add("duplicate_constraint", "constraint id used twice", {c.id});
        }
        if (c.scope == 0) {
            add("empty_scope", "constraint has an empty scope", {c.id});
        }
        if ((c.scope & ~steps) != 0) {
            auto ids = ids_of(schema, c.scope & ~steps);
            ids.insert(ids.begin(), c.id);
            add("scope_not_steps", "scope contains non-step elements", ids);
        }
        if ((c.release & ~releases) != 0) {
            auto ids = ids_of(schema, c.release & ~releases);
            ids.insert(ids.begin(), c.id);
            add("release_not_releases", "release set contains non-release elements", ids);
        }
        for (const auto& [a, b] : exclusive) {
            if (contains(c.scope, a) && contains(c.scope, b)) {
                add("exclusive_scope", "exclusive steps in scope", {c.id, table.ids[a], table.ids[b]});
            }
        }
        const std::size_t arity = count(c.scope);
        switch (c.kind) {
        case ConstraintKind::sod:
        case ConstraintKind::bod:
            if (arity != 2) {
                add("arity", "sod/bod scope must have exactly two steps", {c.id});
            }
            break;
        case ConstraintKind::at_most:
        case ConstraintKind::at_least:
            if (c.k < 1 || c.k > arity) {
                add("k_range", "k must satisfy 1 <= k <= |scope|", {c.id});
            }
            break;
        }
        if (c.weight <= 0) {
            add("weight", "constraint weight must be positive", {c.id});
        }
    }

    if (schema.budget && *schema.budget < 0) {
        add("budget", "budget must be non-negative");
    }
    if (schema.probability && (*schema.probability < 0 || *schema.probability > 1)) {
        add("probability", "probability must lie in [0, 1]");
    }
    return report;
}

} // namespace wfsat

#include "wfsat/arrangements.hpp"

#include "wfsat/error.hpp"

#include <algorithm>

namespace wfsat {

namespace {

struct Expansion {
    NodePtr ast;
    std::vector<std::pair<std::string, Branch>> choices;
};

std::string child_path(const std::string& path, char side)
{
    return (path == "/" ? std::string("/") : path + "/") + side;
}

std::vector<Expansion> expand(const NodePtr& node, const std::string& path)
{
    if (node->is_leaf()) {
        return {Expansion{node, {}}};
    }
    auto lhs = expand(node->left(), child_path(path, 'l'));
    auto rhs = expand(node->right(), child_path(path, 'r'));
    std::vector<Expansion> out;
    if (node->kind() == NodeKind::choice) {
        for (auto& e : lhs) {
            e.choices.insert(e.choices.begin(), {path, Branch::left});
            out.push_back(std::move(e));
        }
        for (auto& e : rhs) {
            e.choices.insert(e.choices.begin(), {path, Branch::right});
            out.push_back(std::move(e));
        }
        return out;
    }
    for (const auto& l : lhs) {
        for (const auto& r : rhs) {
            Expansion e;
            e.ast = node->kind() == NodeKind::seq ? CompositionNode::seq(l.ast, r.ast)
                                                  : CompositionNode::par(l.ast, r.ast);
            e.choices = l.choices;
            e.choices.insert(e.choices.end(), r.choices.begin(), r.choices.end());
            out.push_back(std::move(e));
        }
    }
    return out;
}

bool releases_respect_order(const std::vector<ElementIndex>& order, const Poset& poset)
{
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            if (poset.less(order[j], order[i])) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

std::vector<XorFreeInstance> eliminate_xor(const NodePtr& root, const ElementTable& table)
{
    std::vector<XorFreeInstance> out;
    for (auto& e : expand(root, "/")) {
        Poset poset = compile_poset(*e.ast, table);
        out.push_back(XorFreeInstance{std::move(e.ast), std::move(poset), std::move(e.choices)});
    }
    return out;
}

ElementMask Arrangement::steps() const
{
    ElementMask m = 0;
    for (ElementMask s : slots) {
        m |= s;
    }
    return m;
}

std::size_t Arrangement::slot_of(ElementIndex step) const
{
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (contains(slots[i], step)) {
            return i;
        }
    }
    return slots.size();
}

std::vector<Arrangement> enumerate_arrangements(const XorFreeInstance& instance, const ElementTable& table,
                                                std::size_t instance_index)
{
    const Poset& poset = instance.poset;
    const auto steps = indices_of(instance.members() & table.steps());
    std::vector<ElementIndex> order = indices_of(instance.members() & table.releases());
    const std::size_t q = order.size() + 1;

    std::vector<Arrangement> out;
    std::vector<std::size_t> lo(steps.size());
    std::vector<std::size_t> hi(steps.size());
    std::vector<std::size_t> slot(steps.size());

    do {
        if (!releases_respect_order(order, poset)) {
            continue;
        }
        // Feasible slot interval of each step from its release comparabilities.
        bool feasible = true;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            lo[i] = 0;
            hi[i] = q - 1;
            for (std::size_t j = 0; j < order.size(); ++j) {
                if (poset.less(order[j], steps[i])) {
                    lo[i] = std::max(lo[i], j + 1);
                }
                if (poset.less(steps[i], order[j])) {
                    hi[i] = std::min(hi[i], j);
                }
            }
            feasible = feasible && lo[i] <= hi[i];
        }
        if (!feasible) {
            continue;
        }

        // Depth-first mixed-radix enumeration. Steps are visited in element
        // order, a linear extension, so every step predecessor already has a
        // slot and bounds this step's slot from below.
        auto visit = [&](auto&& self, std::size_t i) -> void {
            if (i == steps.size()) {
                Arrangement a;
                a.instance = instance_index;
                a.release_order = order;
                a.slots.assign(q, 0);
                for (std::size_t k = 0; k < steps.size(); ++k) {
                    a.slots[slot[k]] |= bit(steps[k]);
                }
                out.push_back(std::move(a));
                return;
            }
            std::size_t from = lo[i];
            for (std::size_t k = 0; k < i; ++k) {
                if (poset.less(steps[k], steps[i])) {
                    from = std::max(from, slot[k]);
                }
            }
            for (std::size_t s = from; s <= hi[i]; ++s) {
                slot[i] = s;
                self(self, i + 1);
            }
        };
        visit(visit, 0);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

Arrangement arrangement_of(const ExecutionSequence& seq, const XorFreeInstance& instance,
                           const ElementTable& table, std::size_t instance_index)
{
    if (!instance.poset.is_linear_extension(seq)) {
        throw NotASequence("sequence is not a linear extension of the instance");
    }
    Arrangement a;
    a.instance = instance_index;
    a.slots.push_back(0);
    for (ElementIndex e : seq) {
        if (table.is_step(e)) {
            a.slots.back() |= bit(e);
        } else {
            a.release_order.push_back(e);
            a.slots.push_back(0);
        }
    }
    return a;
}

BigInt count_sequences(const Arrangement& arrangement, const XorFreeInstance& instance)
{
    BigInt product = 1;
    for (ElementMask slot : arrangement.slots) {
        product *= count_linear_extensions(instance.poset, slot);
    }
    return product;
}

std::vector<std::string> arrangement_violations(const Arrangement& arrangement, const XorFreeInstance& instance,
                                                const ElementTable& table)
{
    std::vector<std::string> out;
    const Poset& poset = instance.poset;
    const auto& order = arrangement.release_order;
    const auto& slots = arrangement.slots;
    if (slots.size() != order.size() + 1) {
        out.push_back("slot count must be one more than the release count");
        return out;
    }

    ElementMask seen = 0;
    for (ElementMask s : slots) {
        if ((seen & s) != 0) {
            out.push_back("slots overlap");
        }
        seen |= s;
    }
    if (seen != (instance.members() & table.steps())) {
        out.push_back("slots do not partition the instance steps");
    }
    if (elements_of(order) != (instance.members() & table.releases()) || count(elements_of(order)) != order.size()) {
        out.push_back("release order does not list each release point once");
    }
    if (!releases_respect_order(order, poset)) {
        out.push_back("release order is not a linear extension");
    }

    for (std::size_t i = 0; i < slots.size(); ++i) {
        for_each_bit(slots[i], [&](ElementIndex s) {
            for (std::size_t j = 0; j < order.size(); ++j) {
                if (j >= i && poset.less(order[j], s)) {
                    out.push_back(table.ids[s] + " placed before a release point it follows");
                }
                if (j + 1 <= i && poset.less(s, order[j])) {
                    out.push_back(table.ids[s] + " placed after a release point it precedes");
                }
            }
            for (std::size_t k = i + 1; k < slots.size(); ++k) {
                for_each_bit(slots[k], [&](ElementIndex t) {
                    if (poset.less(t, s)) {
                        out.push_back(table.ids[t] + " must precede " + table.ids[s]);
                    }
                });
            }
        });
    }
    return out;
}

std::string describe(const Arrangement& arrangement, const ElementTable& table)
{
    std::string out;
    for (std::size_t i = 0; i < arrangement.slots.size(); ++i) {
        if (i > 0) {
            out += ", " + table.ids[arrangement.release_order[i - 1]] + ", ";
        }
        out += "{";
        bool first = true;
        for_each_bit(arrangement.slots[i], [&](ElementIndex s) {
            out += (first ? "" : ",") + table.ids[s];
            first = false;
        });
        out += "}";
    }
    return out;
}

} // namespace wfsat

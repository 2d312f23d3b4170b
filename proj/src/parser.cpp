#include "wfsat/parser.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace wfsat {

using nlohmann::json;

namespace {

[[noreturn]] void shape_error(const std::string& where, const std::string& what)
{
    throw SyntaxError("at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

bool is_identifier(const std::string& id)
{
    if (id.empty()) {
        return false;
    }
    const auto first = static_cast<unsigned char>(id[0]);
    if (!std::isalpha(first) && first != '_') {
        return false;
    }
    for (char ch : id) {
        const auto c = static_cast<unsigned char>(ch);
        if (c > 127 || !(std::isalnum(c) || c == '_' || c == '\'' || c == '-' || c == '.')) {
            return false;
        }
    }
    return true;
}

const std::string& expect_id(const json& j, const std::string& where)
{
    if (!j.is_string()) {
        shape_error(where, "expected an id string");
    }
    const auto& s = j.get_ref<const std::string&>();
    if (!is_identifier(s)) {
        shape_error(where, "'" + s + "' is not an identifier");
    }
    return s;
}

std::int64_t expect_int(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) {
        shape_error(where, "expected an integer");
    }
    return j.get<std::int64_t>();
}

Rational expect_rational(const json& j, const std::string& where)
{
    if (!j.is_string()) {
        shape_error(where, "expected a rational string \"N\" or \"N/D\"");
    }
    try {
        return parse_rational(j.get_ref<const std::string&>());
    } catch (const std::invalid_argument& e) {
        shape_error(where, e.what());
    }
}

const json& expect_array(const json& j, const std::string& where)
{
    if (!j.is_array()) {
        shape_error(where, "expected an array");
    }
    return j;
}

NodePtr parse_node(const json& j, const std::string& where)
{
    if (!j.is_object() || j.size() != 1) {
        shape_error(where, "workflow node must be an object with exactly one key");
    }
    const auto& [key, value] = *j.items().begin();
    if (key == "step") {
        return CompositionNode::step(expect_id(value, where + "/step"));
    }
    if (key == "release") {
        return CompositionNode::release(expect_id(value, where + "/release"));
    }
    NodeKind kind;
    if (key == "seq") {
        kind = NodeKind::seq;
    } else if (key == "par") {
        kind = NodeKind::par;
    } else if (key == "xor") {
        kind = NodeKind::choice;
    } else {
        shape_error(where, "unknown node kind '" + key + "'");
    }
    const std::string base = where + "/" + key;
    expect_array(value, base);
    if (value.empty()) {
        shape_error(base, "composition needs at least one child");
    }
    std::vector<NodePtr> children;
    for (std::size_t i = 0; i < value.size(); ++i) {
        children.push_back(parse_node(value[i], base + "/" + std::to_string(i)));
    }
    return CompositionNode::fold(kind, std::move(children));
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed)
{
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            shape_error(where, "unexpected key '" + key + "'");
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    const auto it = obj.find(key);
    if (it == obj.end()) {
        shape_error(where, std::string("missing key '") + key + "'");
    }
    return *it;
}

} // namespace

Schema parse_ccws(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SyntaxError("at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) {
        shape_error("", "instance must be a JSON object");
    }
    check_keys(doc, "",
               {"workflow", "users", "authorizations", "default_unauth_penalty", "step_unauth_penalty",
                "constraints", "budget", "probability"});

    NodePtr workflow = parse_node(require(doc, "workflow", ""), "/workflow");

    std::vector<std::string> users;
    const auto& juser = expect_array(require(doc, "users", ""), "/users");
    for (std::size_t i = 0; i < juser.size(); ++i) {
        users.push_back(expect_id(juser[i], "/users/" + std::to_string(i)));
    }

    Schema schema;
    try {
        schema = Schema::create(std::move(workflow), std::move(users));
    } catch (const SizeLimit& e) {
        ValidationReport report;
        report.violations.push_back({"too_many_elements", e.what(), {}});
        throw SemanticError(std::move(report));
    }

    // Unresolvable names are collected here; everything else is left to
    // validate_schema on the assembled schema.
    ValidationReport unresolved;
    auto unknown = [&](const std::string& what, const std::string& id) {
        unresolved.violations.push_back({"unknown_id", what, {id}});
    };
    auto resolve_element = [&](const std::string& id, const std::string& what) -> std::optional<ElementIndex> {
        auto idx = schema.elements.find(id);
        if (!idx) {
            unknown(what, id);
        }
        return idx;
    };

    const auto& jauth = require(doc, "authorizations", "");
    if (!jauth.is_object()) {
        shape_error("/authorizations", "expected an object");
    }
    for (const auto& [step, list] : jauth.items()) {
        const std::string where = "/authorizations/" + step;
        expect_array(list, where);
        const auto idx = resolve_element(step, "authorization for undeclared step");
        if (idx && !schema.elements.is_step(*idx)) {
            unresolved.violations.push_back({"authorized_release", "release points cannot be authorized", {step}});
            continue;
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& u = expect_id(list[i], where + "/" + std::to_string(i));
            const auto it = std::find(schema.users.begin(), schema.users.end(), u);
            if (it == schema.users.end()) {
                unknown("authorization names undeclared user", u);
            } else if (idx) {
                schema.authorized[*idx][static_cast<std::size_t>(it - schema.users.begin())] = true;
            }
        }
    }

    schema.default_unauth_penalty = expect_int(require(doc, "default_unauth_penalty", ""), "/default_unauth_penalty");
    if (auto it = doc.find("step_unauth_penalty"); it != doc.end()) {
        if (!it->is_object()) {
            shape_error("/step_unauth_penalty", "expected an object");
        }
        for (const auto& [step, value] : it->items()) {
            const auto v = expect_int(value, "/step_unauth_penalty/" + step);
            if (auto idx = resolve_element(step, "penalty for undeclared step")) {
                schema.step_unauth_penalty[*idx] = v;
            }
        }
    }

    const auto& jcons = expect_array(require(doc, "constraints", ""), "/constraints");
    for (std::size_t i = 0; i < jcons.size(); ++i) {
        const std::string where = "/constraints/" + std::to_string(i);
        const auto& jc = jcons[i];
        if (!jc.is_object()) {
            shape_error(where, "constraint must be an object");
        }
        check_keys(jc, where, {"id", "kind", "scope", "k", "release", "weight"});
        WeightedConstraint c;
        c.id = expect_id(require(jc, "id", where), where + "/id");
        const auto& jkind = require(jc, "kind", where);
        const auto kind = jkind.is_string() ? constraint_kind_from(jkind.get_ref<const std::string&>()) : std::nullopt;
        if (!kind) {
            shape_error(where + "/kind", "kind must be one of sod, bod, atmost, atleast");
        }
        c.kind = *kind;
        const bool counted = c.kind == ConstraintKind::at_most || c.kind == ConstraintKind::at_least;
        if (counted) {
            const auto k = expect_int(require(jc, "k", where), where + "/k");
            if (k < 0) {
                unresolved.violations.push_back({"k_range", "k must be positive", {c.id}});
            }
            c.k = static_cast<std::size_t>(std::max<std::int64_t>(k, 0));
        } else if (jc.contains("k")) {
            shape_error(where + "/k", "k is only allowed for atmost/atleast");
        }
        const auto& jscope = expect_array(require(jc, "scope", where), where + "/scope");
        for (std::size_t s = 0; s < jscope.size(); ++s) {
            const auto& id = expect_id(jscope[s], where + "/scope/" + std::to_string(s));
            if (auto idx = resolve_element(id, "constraint " + c.id + " scope names undeclared step")) {
                if (contains(c.scope, *idx)) {
                    unresolved.violations.push_back({"duplicate_scope_entry", "scope lists a step twice", {c.id, id}});
                }
                c.scope |= bit(*idx);
            }
        }
        if (auto it = jc.find("release"); it != jc.end()) {
            expect_array(*it, where + "/release");
            for (std::size_t r = 0; r < it->size(); ++r) {
                const auto& id = expect_id((*it)[r], where + "/release/" + std::to_string(r));
                if (auto idx = resolve_element(id, "constraint " + c.id + " names undeclared release point")) {
                    c.release |= bit(*idx);
                }
            }
        }
        c.weight = expect_int(require(jc, "weight", where), where + "/weight");
        schema.constraints.push_back(std::move(c));
    }

    if (auto it = doc.find("budget"); it != doc.end()) {
        schema.budget = expect_rational(*it, "/budget");
    }
    if (auto it = doc.find("probability"); it != doc.end()) {
        schema.probability = expect_rational(*it, "/probability");
    }

    if (!unresolved.ok()) {
        throw SemanticError(std::move(unresolved));
    }
    auto report = validate_schema(schema);
    if (!report.ok()) {
        throw SemanticError(std::move(report));
    }
    return schema;
}

Schema load_ccws(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SyntaxError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ccws(buf.str());
}

namespace {

void flatten(const CompositionNode& node, NodeKind kind, std::vector<const CompositionNode*>& out)
{
    if (node.kind() == kind) {
        flatten(*node.left(), kind, out);
        flatten(*node.right(), kind, out);
    } else {
        out.push_back(&node);
    }
}

json node_to_json(const CompositionNode& node)
{
    switch (node.kind()) {
    case NodeKind::step:
        return json{{"step", node.id()}};
    case NodeKind::release:
        return json{{"release", node.id()}};
    default:
        break;
    }
    std::vector<const CompositionNode*> children;
    flatten(node, node.kind(), children);
    json arr = json::array();
    for (const auto* child : children) {
        arr.push_back(node_to_json(*child));
    }
    const char* key = node.kind() == NodeKind::seq ? "seq" : node.kind() == NodeKind::par ? "par" : "xor";
    return json{{key, std::move(arr)}};
}

json ids_json(const Schema& schema, ElementMask m)
{
    json arr = json::array();
    for_each_bit(m, [&](ElementIndex i) { arr.push_back(schema.elements.ids[i]); });
    return arr;
}

} // namespace

std::string write_ccws(const Schema& schema)
{
    json doc;
    doc["workflow"] = node_to_json(*schema.workflow);
    doc["users"] = schema.users;

    json auth = json::object();
    for_each_bit(schema.steps(), [&](ElementIndex s) {
        json list = json::array();
        for (UserIndex u = 0; u < schema.users.size(); ++u) {
            if (schema.is_authorized(s, u)) {
                list.push_back(schema.users[u]);
            }
        }
        auth[schema.elements.ids[s]] = std::move(list);
    });
    doc["authorizations"] = std::move(auth);
    doc["default_unauth_penalty"] = schema.default_unauth_penalty;
    if (!schema.step_unauth_penalty.empty()) {
        json pen = json::object();
        for (const auto& [step, value] : schema.step_unauth_penalty) {
            pen[schema.elements.ids[step]] = value;
        }
        doc["step_unauth_penalty"] = std::move(pen);
    }

    json cons = json::array();
    for (const auto& c : schema.constraints) {
        json jc;
        jc["id"] = c.id;
        jc["kind"] = std::string(to_string(c.kind));
        jc["scope"] = ids_json(schema, c.scope);
        jc["release"] = ids_json(schema, c.release);
        jc["weight"] = c.weight;
        if (c.kind == ConstraintKind::at_most || c.kind == ConstraintKind::at_least) {
            jc["k"] = c.k;
        }
        cons.push_back(std::move(jc));
    }
    doc["constraints"] = std::move(cons);
    if (schema.budget) {
        doc["budget"] = format_rational(*schema.budget);
    }
    if (schema.probability) {
        doc["probability"] = format_rational(*schema.probability);
    }
    return doc.dump(2) + "\n";
}

namespace {

struct DotBuilder {
    std::ostringstream vertices;
    std::ostringstream edges;
    int par_count = 0;
    int xor_count = 0;

    static std::string quote(const std::string& id)
    {
        std::string out = "\"";
        for (char c : id) {
            if (c == '"' || c == '\\') {
                out += '\\';
            }
            out += c;
        }
        return out + "\"";
    }

    void orchestration(const std::string& name, const std::string& label)
    {
        vertices << "  " << quote(name) << " [label=" << quote(label) << ", shape=plaintext];\n";
    }

    void edge(const std::string& from, const std::string& to)
    {
        edges << "  " << quote(from) << " -> " << quote(to) << ";\n";
    }

    // Returns the (entry, exit) vertices of the subgraph for `node`.
    std::pair<std::string, std::string> build(const CompositionNode& node)
    {
        switch (node.kind()) {
        case NodeKind::step:
            vertices << "  " << quote(node.id()) << " [shape=box];\n";
            return {node.id(), node.id()};
        case NodeKind::release:
            vertices << "  " << quote(node.id()) << " [shape=circle];\n";
            return {node.id(), node.id()};
        case NodeKind::seq: {
            auto [l_in, l_out] = build(*node.left());
            auto [r_in, r_out] = build(*node.right());
            edge(l_out, r_in);
            return {l_in, r_out};
        }
        case NodeKind::par:
        case NodeKind::choice: {
            const bool par = node.kind() == NodeKind::par;
            const std::string suffix = par ? "par" + std::to_string(++par_count) : "xor" + std::to_string(++xor_count);
            const std::string fork = "alpha_" + suffix;
            const std::string join = "omega_" + suffix;
            const std::string sym = par ? "∥" : "⊗";
            orchestration(fork, "α" + sym);
            auto [l_in, l_out] = build(*node.left());
            auto [r_in, r_out] = build(*node.right());
            orchestration(join, "ω" + sym);
            edge(fork, l_in);
            edge(fork, r_in);
            edge(l_out, join);
            edge(r_out, join);
            return {fork, join};
        }
        }
        return {};
    }
};

} // namespace

std::string export_dot(const CompositionNode& root)
{
    DotBuilder b;
    b.orchestration("alpha", "α");
    auto [entry, exit] = b.build(root);
    b.orchestration("omega", "ω");
    b.edge("alpha", entry);
    b.edge(exit, "omega");
    return "digraph workflow {\n  rankdir=LR;\n" + b.vertices.str() + b.edges.str() + "}\n";
}

} // namespace wfsat

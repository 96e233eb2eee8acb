#include "ff/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

using namespace std;

namespace ff::pddl {

ParseError::ParseError(const string &file, int line, int column,
                       const string &message)
    : InputError(file + (line > 0 ? ":" + to_string(line) + ":" +
                                        to_string(column)
                                  : string()) +
                 ": " + message),
      file_(file), line_(line), column_(column), message_(message) {}

bool LiftedTask::is_subtype(const string &type, const string &ancestor) const {
    if (ancestor == "object")
        return true;
    string current = type;
    // Type trees are acyclic (checked at parse time), bounded walk anyway.
    for (size_t steps = 0; steps <= types.size(); ++steps) {
        if (current == ancestor)
            return true;
        auto it = find_if(types.begin(), types.end(),
                          [&](const TypedName &t) { return t.name == current; });
        if (it == types.end())
            return false;
        current = it->type;
    }
    return false;
}

const PredicateSignature *LiftedTask::find_predicate(const string &name) const {
    for (const PredicateSignature &p : predicates)
        if (p.name == name)
            return &p;
    return nullptr;
}

namespace {

struct SExpr {
    bool is_list = false;
    string symbol;
    vector<SExpr> items;
    int line = 0;
    int column = 0;

    bool is_symbol(string_view s) const { return !is_list && symbol == s; }
    bool head_is(string_view s) const {
        return is_list && !items.empty() && items[0].is_symbol(s);
    }
};

class Reader {
public:
    Reader(string_view text, string file) : text_(text), file_(std::move(file)) {}

    SExpr read_document() {
        skip_blank();
        if (at_end())
            fail(line_, column_, "empty input");
        SExpr e = read();
        skip_blank();
        if (!at_end())
            fail(line_, column_, "unexpected text after the closing parenthesis");
        return e;
    }

    [[noreturn]] void fail(int line, int column, const string &msg) const {
        throw ParseError(file_, line, column, msg);
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (!at_end()) {
            char c = text_[pos_];
            if (c == ';') {
                while (!at_end() && text_[pos_] != '\n')
                    advance();
            } else if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_blank();
        if (at_end())
            fail(line_, column_, "unexpected end of input");
        SExpr e;
        e.line = line_;
        e.column = column_;
        char c = text_[pos_];
        if (c == ')')
            fail(line_, column_, "unexpected ')'");
        if (c == '(') {
            e.is_list = true;
            advance();
            for (;;) {
                skip_blank();
                if (at_end())
                    fail(e.line, e.column, "unbalanced '('");
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (!at_end()) {
            c = text_[pos_];
            if (isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
                c == ';')
                break;
            e.symbol += static_cast<char>(tolower(static_cast<unsigned char>(c)));
            advance();
        }
        return e;
    }

    string_view text_;
    string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Builder {
public:
    explicit Builder(string file) : file_(std::move(file)) {}

    [[noreturn]] void fail(const SExpr &at, const string &msg) const {
        throw ParseError(file_, at.line, at.column, msg);
    }

    const string &expect_symbol(const SExpr &e, const string &what) const {
        if (e.is_list)
            fail(e, "expected " + what + ", found a list");
        return e.symbol;
    }

    const SExpr &expect_list(const SExpr &e, const string &what) const {
        if (!e.is_list)
            fail(e, "expected " + what + ", found '" + e.symbol + "'");
        return e;
    }

    // Parses "a b - t c" style lists. Untyped entries get type "object".
    vector<TypedName> typed_list(const SExpr &owner, size_t first,
                                 bool variables) const {
        vector<TypedName> out;
        size_t pending_from = 0;
        const auto &items = owner.items;
        for (size_t i = first; i < items.size(); ++i) {
            const SExpr &item = items[i];
            if (item.is_list) {
                if (item.head_is("either"))
                    fail(item, "unsupported construct 'either' in a typed list");
                fail(item, "unexpected list in a typed list");
            }
            if (item.symbol == "-") {
                if (i + 1 >= items.size())
                    fail(item, "missing type after '-'");
                const SExpr &type = items[i + 1];
                if (type.is_list && type.head_is("either"))
                    fail(type, "unsupported construct 'either' in a typed list");
                const string &t = expect_symbol(type, "a type name");
                if (pending_from == out.size())
                    fail(item, "'-' without preceding names");
                for (size_t k = pending_from; k < out.size(); ++k)
                    out[k].type = t;
                pending_from = out.size();
                ++i;
                continue;
            }
            if (variables != (item.symbol.front() == '?'))
                fail(item, variables ? "expected a variable, found '" +
                                           item.symbol + "'"
                                     : "unexpected variable '" + item.symbol +
                                           "'");
            out.push_back({item.symbol, "object"});
        }
        return out;
    }

    // Conjunction of positive atoms; `what` names the context for messages.
    void conjunction(const SExpr &e, vector<Atom> &out, const string &what) const {
        if (!e.is_list)
            fail(e, "expected a formula in " + what);
        if (e.items.empty())
            return;
        if (e.head_is("and")) {
            for (size_t i = 1; i < e.items.size(); ++i)
                conjunction(e.items[i], out, what);
            return;
        }
        reject_connective(e, what);
        out.push_back(atom(e));
    }

    void reject_connective(const SExpr &e, const string &what) const {
        static const char *unsupported[] = {"or",     "not",  "imply", "exists",
                                            "forall", "when", "="};
        for (const char *c : unsupported)
            if (e.head_is(c))
                fail(e, string("unsupported construct '") + c + "' in " + what);
    }

    Atom atom(const SExpr &e) const {
        if (!e.is_list || e.items.empty())
            fail(e, "expected an atom");
        Atom a;
        a.predicate = expect_symbol(e.items[0], "a predicate name");
        for (size_t i = 1; i < e.items.size(); ++i)
            a.terms.push_back(expect_symbol(e.items[i], "a term"));
        return a;
    }

    // Adds literals of an effect formula to `target`; nested forall/when
    // produce separate entries in `extra`.
    void effect(const SExpr &e, LiftedEffect &target, vector<TypedName> scope,
                vector<LiftedEffect> &extra, bool inside_when) const {
        if (!e.is_list)
            fail(e, "expected an effect");
        if (e.items.empty())
            return;
        if (e.head_is("and")) {
            for (size_t i = 1; i < e.items.size(); ++i)
                effect(e.items[i], target, scope, extra, inside_when);
            return;
        }
        if (e.head_is("not")) {
            if (e.items.size() != 2)
                fail(e, "'not' takes exactly one atom");
            reject_connective(e.items[1], "an effect");
            target.deletes.push_back(atom(e.items[1]));
            return;
        }
        if (e.head_is("forall")) {
            if (inside_when)
                fail(e, "unsupported construct 'forall' inside 'when'");
            if (e.items.size() != 3)
                fail(e, "'forall' takes a parameter list and an effect");
            LiftedEffect quantified;
            quantified.forall = scope;
            auto params = typed_list(expect_list(e.items[1], "a parameter list"),
                                     0, true);
            quantified.forall.insert(quantified.forall.end(), params.begin(),
                                     params.end());
            vector<LiftedEffect> nested;
            effect(e.items[2], quantified, quantified.forall, nested, false);
            if (!quantified.adds.empty() || !quantified.deletes.empty() ||
                !quantified.condition.empty())
                extra.push_back(std::move(quantified));
            for (auto &n : nested)
                extra.push_back(std::move(n));
            return;
        }
        if (e.head_is("when")) {
            if (inside_when)
                fail(e, "nested 'when' is not supported");
            if (e.items.size() != 3)
                fail(e, "'when' takes a condition and an effect");
            LiftedEffect conditional;
            conditional.forall = scope;
            conjunction(e.items[1], conditional.condition, "an effect condition");
            vector<LiftedEffect> unused;
            effect(e.items[2], conditional, scope, unused, true);
            extra.push_back(std::move(conditional));
            return;
        }
        reject_connective(e, "an effect");
        target.adds.push_back(atom(e));
    }

    string file_;
};

// Section lookup by keyword, preserving order.
vector<const SExpr *> sections(const SExpr &root, size_t first) {
    vector<const SExpr *> out;
    for (size_t i = first; i < root.items.size(); ++i)
        out.push_back(&root.items[i]);
    return out;
}

class TaskChecker {
public:
    TaskChecker(const LiftedTask &task, const Builder &b) : task_(task), b_(b) {}

    bool type_known(const string &t) const {
        if (t == "object")
            return true;
        return any_of(task_.types.begin(), task_.types.end(),
                      [&](const TypedName &x) { return x.name == t; });
    }

    bool compatible(const string &a, const string &b) const {
        return task_.is_subtype(a, b) || task_.is_subtype(b, a);
    }

    // `scope` maps variables to their types.
    void check_atom(const SExpr &at, const Atom &a,
                    const map<string, string> &scope) const {
        const PredicateSignature *sig = task_.find_predicate(a.predicate);
        if (!sig)
            b_.fail(at, "unknown predicate '" + a.predicate + "'");
        if (sig->arg_types.size() != a.terms.size())
            b_.fail(at, "predicate '" + a.predicate + "' expects " +
                            to_string(sig->arg_types.size()) + " arguments, got " +
                            to_string(a.terms.size()));
        for (size_t i = 0; i < a.terms.size(); ++i) {
            const string &term = a.terms[i];
            string type;
            if (term.front() == '?') {
                auto it = scope.find(term);
                if (it == scope.end())
                    b_.fail(at, "unbound variable '" + term + "'");
                type = it->second;
            } else {
                type = object_type(at, term);
            }
            if (!compatible(type, sig->arg_types[i]))
                b_.fail(at, "argument '" + term + "' of type '" + type +
                                "' does not match '" + sig->arg_types[i] +
                                "' in predicate '" + a.predicate + "'");
        }
    }

    string object_type(const SExpr &at, const string &name) const {
        for (const TypedName &o : task_.objects)
            if (o.name == name)
                return o.type;
        b_.fail(at, "unknown constant '" + name + "'");
    }

private:
    const LiftedTask &task_;
    const Builder &b_;
};

void parse_domain(const SExpr &root, LiftedTask &task, const Builder &b) {
    if (!root.head_is("define"))
        b.fail(root, "expected (define (domain ...) ...)");
    if (root.items.size() < 2 || !root.items[1].head_is("domain") ||
        root.items[1].items.size() != 2)
        b.fail(root, "expected (domain <name>) after define");
    task.domain_name = b.expect_symbol(root.items[1].items[1], "a domain name");

    struct PendingAction {
        const SExpr *node;
    };
    vector<PendingAction> actions;

    for (const SExpr *sec : sections(root, 2)) {
        const SExpr &s = b.expect_list(*sec, "a domain section");
        if (s.items.empty())
            b.fail(s, "empty domain section");
        const string &key = b.expect_symbol(s.items[0], "a section keyword");
        if (key == ":requirements") {
            for (size_t i = 1; i < s.items.size(); ++i) {
                const string &r = b.expect_symbol(s.items[i], "a requirement");
                if (r != ":strips" && r != ":typing" && r != ":conditional-effects")
                    b.fail(s.items[i], "unsupported requirement '" + r + "'");
            }
        } else if (key == ":types") {
            for (TypedName &t : b.typed_list(s, 1, false)) {
                if (t.name == "object")
                    continue;
                task.types.push_back(std::move(t));
            }
        } else if (key == ":constants") {
            for (TypedName &c : b.typed_list(s, 1, false))
                task.objects.push_back(std::move(c));
        } else if (key == ":predicates") {
            for (size_t i = 1; i < s.items.size(); ++i) {
                const SExpr &p = b.expect_list(s.items[i], "a predicate declaration");
                if (p.items.empty())
                    b.fail(p, "empty predicate declaration");
                PredicateSignature sig;
                sig.name = b.expect_symbol(p.items[0], "a predicate name");
                if (task.find_predicate(sig.name))
                    b.fail(p, "predicate '" + sig.name + "' declared twice");
                for (const TypedName &v : b.typed_list(p, 1, true))
                    sig.arg_types.push_back(v.type);
                task.predicates.push_back(std::move(sig));
            }
        } else if (key == ":action") {
            actions.push_back({&s});
        } else {
            b.fail(s.items[0], "unsupported domain section '" + key + "'");
        }
    }

    // Type hierarchy sanity: known parents, no cycles.
    for (const TypedName &t : task.types) {
        if (t.type != "object" &&
            none_of(task.types.begin(), task.types.end(),
                    [&](const TypedName &x) { return x.name == t.type; }))
            b.fail(root, "type '" + t.name + "' has undeclared parent '" +
                             t.type + "'");
        string cur = t.type;
        for (size_t steps = 0; cur != "object"; ++steps) {
            if (cur == t.name || steps > task.types.size())
                b.fail(root, "cyclic type hierarchy at '" + t.name + "'");
            cur = find_if(task.types.begin(), task.types.end(),
                          [&](const TypedName &x) { return x.name == cur; })
                      ->type;
        }
    }

    TaskChecker checker(task, b);
    for (const PredicateSignature &p : task.predicates)
        for (const string &t : p.arg_types)
            if (!checker.type_known(t))
                b.fail(root, "predicate '" + p.name + "' uses unknown type '" +
                                 t + "'");
    for (const TypedName &c : task.objects)
        if (!checker.type_known(c.type))
            b.fail(root, "constant '" + c.name + "' has unknown type '" +
                             c.type + "'");

    for (const PendingAction &pending : actions) {
        const SExpr &s = *pending.node;
        Schema schema;
        if (s.items.size() < 2)
            b.fail(s, "action without a name");
        schema.name = b.expect_symbol(s.items[1], "an action name");
        schema.effects.emplace_back();
        vector<LiftedEffect> extra;
        const SExpr *effect_node = nullptr;
        const SExpr *pre_node = nullptr;
        for (size_t i = 2; i < s.items.size(); i += 2) {
            const string &k = b.expect_symbol(s.items[i], "an action keyword");
            if (i + 1 >= s.items.size())
                b.fail(s.items[i], "missing value for '" + k + "'");
            const SExpr &v = s.items[i + 1];
            if (k == ":parameters") {
                schema.parameters =
                    b.typed_list(b.expect_list(v, "a parameter list"), 0, true);
            } else if (k == ":precondition") {
                pre_node = &v;
                b.conjunction(v, schema.precondition, "a precondition");
            } else if (k == ":effect") {
                effect_node = &v;
                b.effect(v, schema.effects[0], {}, extra, false);
            } else {
                b.fail(s.items[i], "unsupported action keyword '" + k + "'");
            }
        }
        for (auto &e : extra)
            schema.effects.push_back(std::move(e));

        map<string, string> scope;
        for (const TypedName &p : schema.parameters) {
            if (!checker.type_known(p.type))
                b.fail(s, "parameter '" + p.name + "' has unknown type '" +
                              p.type + "'");
            if (!scope.emplace(p.name, p.type).second)
                b.fail(s, "duplicate parameter '" + p.name + "'");
        }
        for (const Atom &a : schema.precondition)
            checker.check_atom(pre_node ? *pre_node : s, a, scope);
        for (const LiftedEffect &eff : schema.effects) {
            map<string, string> inner = scope;
            for (const TypedName &v : eff.forall) {
                if (!checker.type_known(v.type))
                    b.fail(s, "parameter '" + v.name + "' has unknown type '" +
                                  v.type + "'");
                inner[v.name] = v.type;
            }
            const SExpr &at = effect_node ? *effect_node : s;
            for (const Atom &a : eff.condition)
                checker.check_atom(at, a, inner);
            for (const Atom &a : eff.adds)
                checker.check_atom(at, a, inner);
            for (const Atom &a : eff.deletes)
                checker.check_atom(at, a, inner);
        }
        task.schemata.push_back(std::move(schema));
    }
}

void parse_problem(const SExpr &root, LiftedTask &task, const Builder &b) {
    if (!root.head_is("define"))
        b.fail(root, "expected (define (problem ...) ...)");
    if (root.items.size() < 2 || !root.items[1].head_is("problem") ||
        root.items[1].items.size() != 2)
        b.fail(root, "expected (problem <name>) after define");
    task.problem_name = b.expect_symbol(root.items[1].items[1], "a problem name");

    TaskChecker checker(task, b);
    bool have_goal = false;
    const map<string, string> no_scope;
    for (const SExpr *sec : sections(root, 2)) {
        const SExpr &s = b.expect_list(*sec, "a problem section");
        if (s.items.empty())
            b.fail(s, "empty problem section");
        const string &key = b.expect_symbol(s.items[0], "a section keyword");
        if (key == ":domain") {
            if (s.items.size() != 2)
                b.fail(s, "expected (:domain <name>)");
            const string &name = b.expect_symbol(s.items[1], "a domain name");
            if (name != task.domain_name)
                b.fail(s.items[1], "problem refers to domain '" + name +
                                       "' but the domain is '" +
                                       task.domain_name + "'");
        } else if (key == ":requirements") {
            continue;
        } else if (key == ":objects") {
            for (TypedName &o : b.typed_list(s, 1, false)) {
                if (!checker.type_known(o.type))
                    b.fail(s, "object '" + o.name + "' has unknown type '" +
                                  o.type + "'");
                if (any_of(task.objects.begin(), task.objects.end(),
                           [&](const TypedName &x) { return x.name == o.name; }))
                    b.fail(s, "object '" + o.name + "' declared twice");
                task.objects.push_back(std::move(o));
            }
        } else if (key == ":init") {
            for (size_t i = 1; i < s.items.size(); ++i) {
                const SExpr &item = s.items[i];
                b.reject_connective(item, "the initial state");
                Atom a = b.atom(item);
                checker.check_atom(item, a, no_scope);
                task.init.push_back(std::move(a));
            }
        } else if (key == ":goal") {
            if (s.items.size() != 2)
                b.fail(s, "expected (:goal <formula>)");
            vector<Atom> goal;
            b.conjunction(s.items[1], goal, "the goal");
            for (const Atom &a : goal) {
                for (const string &t : a.terms)
                    if (t.front() == '?')
                        b.fail(s.items[1], "variable '" + t + "' in the goal");
                checker.check_atom(s.items[1], a, no_scope);
            }
            task.goal = std::move(goal);
            have_goal = true;
        } else {
            b.fail(s.items[0], "unsupported problem section '" + key + "'");
        }
    }
    if (!have_goal)
        b.fail(root, "problem has no :goal");
}

string read_file(const string &path) {
    ifstream in(path, ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

LiftedTask parse(string_view domain_text, string_view problem_text,
                 const string &domain_file, const string &problem_file) {
    LiftedTask task;
    {
        Reader reader(domain_text, domain_file);
        SExpr root = reader.read_document();
        parse_domain(root, task, Builder(domain_file));
    }
    {
        Reader reader(problem_text, problem_file);
        SExpr root = reader.read_document();
        parse_problem(root, task, Builder(problem_file));
    }
    return task;
}

LiftedTask parse_files(const string &domain_path, const string &problem_path) {
    return parse(read_file(domain_path), read_file(problem_path), domain_path,
                 problem_path);
}

StaticPredicateSet detect_statics(const LiftedTask &lifted) {
    StaticPredicateSet affected;
    for (const Schema &s : lifted.schemata)
        for (const LiftedEffect &e : s.effects) {
            for (const Atom &a : e.adds)
                affected.insert(a.predicate);
            for (const Atom &a : e.deletes)
                affected.insert(a.predicate);
        }
    StaticPredicateSet statics;
    for (const PredicateSignature &p : lifted.predicates)
        if (!affected.count(p.name))
            statics.insert(p.name);
    return statics;
}

} // namespace ff::pddl

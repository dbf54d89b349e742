#include "qnc/space_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qnc/errors.hpp"

namespace qnc {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text)
{
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string raw(text.substr(pos, end - pos));
        ++number;
        pos = end + 1;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.resize(hash);
        std::istringstream is(raw);
        Line line{number, {}};
        for (std::string tok; is >> tok;)
            line.tokens.push_back(tok);
        if (!line.tokens.empty())
            out.push_back(std::move(line));
        if (end == text.size())
            break;
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg)
{
    throw input_error("line " + std::to_string(line) + ": " + msg);
}

void expect(const Line& l, std::size_t i, std::string_view keyword)
{
    if (l.tokens.size() <= i || l.tokens[i] != keyword)
        fail(l.number, "expected '" + std::string(keyword) + "'");
}

Rational rational_at(const Line& l, std::size_t i)
{
    if (l.tokens.size() <= i)
        fail(l.number, "missing value");
    try {
        return parse_rational(l.tokens[i]);
    } catch (const input_error& e) {
        fail(l.number, e.what());
    }
}

Index index_at(const Line& l, std::size_t i)
{
    Rational r = rational_at(l, i);
    if (r.get_den() != 1 || sgn(r) < 0 || !r.get_num().fits_slong_p())
        fail(l.number, "expected a nonnegative integer, got '" + l.tokens[i] + "'");
    return r.get_num().get_si();
}

struct PendingFamily {
    std::size_t line;
    TailFamily family;
    bool shift;
    Index k;
    std::vector<std::string> targets;
};

} // namespace

Instance parse_instance(std::string_view text)
{
    auto lines = tokenize(text);
    if (lines.empty() || lines.front().tokens[0] != "space")
        throw input_error("line " + std::to_string(lines.empty() ? 1 : lines.front().number) + ": expected 'space <name>' header");
    if (lines.front().tokens.size() != 2)
        fail(lines.front().number, "expected 'space <name>'");
    std::string name = lines.front().tokens[1];

    std::vector<ExplicitAtom> atoms;
    std::vector<std::size_t> atom_lines;
    std::map<std::string, std::size_t> atom_slot;
    std::set<std::string> ids;
    std::vector<PendingFamily> pending;
    std::vector<Line> phi_lines;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line& l = lines[li];
        const std::string& kind = l.tokens[0];
        if (kind == "atom") {
            if (l.tokens.size() != 4)
                fail(l.number, "expected 'atom <id> weight <p/q>'");
            expect(l, 2, "weight");
            const std::string& id = l.tokens[1];
            if (id.find('[') != std::string::npos)
                fail(l.number, "atom id must not contain '['");
            if (!ids.insert(id).second)
                fail(l.number, "duplicate id '" + id + "'");
            Rational w = rational_at(l, 3);
            if (sgn(w) < 0)
                fail(l.number, "negative weight");
            atom_slot[id] = atoms.size();
            atoms.push_back({id, w});
            atom_lines.push_back(l.number);
        } else if (kind == "family") {
            if (l.tokens.size() < 11)
                fail(l.number, "incomplete family line");
            const std::string& id = l.tokens[1];
            if (id.find('[') != std::string::npos)
                fail(l.number, "family id must not contain '['");
            if (!ids.insert(id).second)
                fail(l.number, "duplicate id '" + id + "'");
            expect(l, 2, "start");
            expect(l, 4, "weight");
            expect(l, 6, "ratio");
            expect(l, 8, "map");
            PendingFamily p{l.number, {id, index_at(l, 3), rational_at(l, 5), rational_at(l, 7)}, false, 0, {}};
            if (sgn(p.family.alpha) <= 0 || sgn(p.family.ratio) <= 0)
                fail(l.number, "family weight and ratio must be positive");
            if (l.tokens[9] == "shift") {
                p.shift = true;
                p.k = index_at(l, 10);
                if (p.k < 1)
                    fail(l.number, "shift needs k >= 1");
                expect(l, 11, "into");
                p.targets.assign(l.tokens.begin() + 12, l.tokens.end());
                if (static_cast<Index>(p.targets.size()) != p.k)
                    fail(l.number, "shift " + std::to_string(p.k) + " needs exactly " + std::to_string(p.k) + " boundary targets");
            } else if (l.tokens[9] == "fanin") {
                if (l.tokens.size() != 11)
                    fail(l.number, "expected 'map fanin <target>'");
                p.targets = {l.tokens[10]};
            } else {
                fail(l.number, "unknown map rule '" + l.tokens[9] + "'");
            }
            pending.push_back(std::move(p));
        } else if (kind == "phi") {
            if (l.tokens.size() != 4 || l.tokens[2] != "->")
                fail(l.number, "expected 'phi <id> -> <id>'");
            phi_lines.push_back(l);
        } else if (kind == "space") {
            fail(l.number, "duplicate 'space' header");
        } else {
            fail(l.number, "unknown directive '" + kind + "'");
        }
    }

    auto resolve = [&](std::size_t line, const std::string& id) {
        auto it = atom_slot.find(id);
        if (it == atom_slot.end())
            fail(line, "unknown explicit atom '" + id + "'");
        return it->second;
    };

    std::vector<std::optional<std::size_t>> map(atoms.size());
    for (const Line& l : phi_lines) {
        std::size_t from = resolve(l.number, l.tokens[1]);
        std::size_t to = resolve(l.number, l.tokens[3]);
        if (map[from])
            fail(l.number, "phi of '" + l.tokens[1] + "' defined twice");
        map[from] = to;
    }
    std::vector<std::size_t> explicit_map;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!map[i])
            fail(atom_lines[i], "phi is not total: no image for atom '" + atoms[i].id + "'");
        explicit_map.push_back(*map[i]);
    }

    std::vector<TailFamily> families;
    std::vector<MapRule> rules;
    for (const auto& p : pending) {
        families.push_back(p.family);
        if (p.shift) {
            ShiftRule r{p.k, {}};
            for (const auto& t : p.targets)
                r.into.push_back(resolve(p.line, t));
            rules.emplace_back(std::move(r));
        } else {
            rules.emplace_back(FanInRule{resolve(p.line, p.targets[0])});
        }
    }

    try {
        MeasureSpace space(std::move(atoms), std::move(families));
        Transformation phi(space, std::move(explicit_map), std::move(rules));
        return Instance{std::move(name), std::move(space), std::move(phi)};
    } catch (const input_error& e) {
        throw input_error("line " + std::to_string(lines.front().number) + ": " + e.what());
    }
}

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

Instance read_instance_file(const std::string& path)
{
    return parse_instance(slurp(path));
}

std::string render_instance(const Instance& inst)
{
    const MeasureSpace& s = inst.space;
    std::ostringstream os;
    os << "space " << inst.name << '\n';
    for (const auto& a : s.atoms())
        os << "atom " << a.id << " weight " << format_rational_pq(a.weight) << '\n';
    for (std::size_t j = 0; j < s.family_count(); ++j) {
        const TailFamily& f = s.family(j);
        os << "family " << f.id << " start " << f.start << " weight " << format_rational_pq(f.alpha) << " ratio "
           << format_rational_pq(f.ratio) << " map ";
        if (const auto* sh = std::get_if<ShiftRule>(&inst.phi.rule(j))) {
            os << "shift " << sh->k << " into";
            for (std::size_t t : sh->into)
                os << ' ' << s.atom(t).id;
        } else {
            os << "fanin " << s.atom(std::get<FanInRule>(inst.phi.rule(j)).target).id;
        }
        os << '\n';
    }
    for (std::size_t i = 0; i < s.explicit_count(); ++i)
        os << "phi " << s.atom(i).id << " -> " << s.atom(inst.phi.apply_explicit(i)).id << '\n';
    return os.str();
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

DiscreteMeasure parse_measure(std::size_t line, std::string_view body)
{
    std::vector<std::pair<Rational, Rational>> points;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string_view::npos)
            comma = body.size();
        std::istringstream entry{std::string(trim(body.substr(pos, comma - pos)))};
        std::string point, mass, extra;
        if (!(entry >> point >> mass) || (entry >> extra))
            fail(line, "expected 't<i>=<p/q> mass=<p/q>'");
        auto eq = point.find('=');
        if (point.empty() || point[0] != 't' || eq == std::string::npos)
            fail(line, "expected 't<i>=<p/q>', got '" + point + "'");
        if (mass.rfind("mass=", 0) != 0)
            fail(line, "expected 'mass=<p/q>', got '" + mass + "'");
        try {
            points.emplace_back(parse_rational(point.substr(eq + 1)), parse_rational(mass.substr(5)));
        } catch (const input_error& e) {
            fail(line, e.what());
        }
        pos = comma + 1;
        if (comma == body.size())
            break;
    }
    try {
        return DiscreteMeasure(std::move(points));
    } catch (const input_error& e) {
        fail(line, e.what());
    }
}

} // namespace

ProbabilityFamily parse_family(std::string_view text, const MeasureSpace& space)
{
    std::vector<std::optional<DiscreteMeasure>> explicit_measures(space.explicit_count());
    std::vector<std::optional<DiscreteMeasure>> rules(space.family_count());
    std::vector<std::map<Index, DiscreteMeasure>> exceptions(space.family_count());

    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty())
            continue;
        if (raw.rfind("P ", 0) != 0)
            fail(number, "expected 'P <atom-id> : ...'");
        auto colon = raw.find(" : ");
        if (colon == std::string_view::npos)
            fail(number, "expected ' : ' after the atom id");
        std::string id(trim(raw.substr(2, colon - 2)));
        DiscreteMeasure m = parse_measure(number, raw.substr(colon + 3));

        if (id.size() > 3 && id.compare(id.size() - 3, 3, "[*]") == 0) {
            auto fam = space.find_family(id.substr(0, id.size() - 3));
            if (!fam)
                fail(number, "unknown family in '" + id + "'");
            if (rules[*fam])
                fail(number, "duplicate measure for '" + id + "'");
            rules[*fam] = std::move(m);
            continue;
        }
        auto x = space.find(id);
        if (!x)
            fail(number, "unknown atom '" + id + "'");
        if (x->member) {
            if (!exceptions[x->slot].emplace(x->n, std::move(m)).second)
                fail(number, "duplicate measure for '" + id + "'");
        } else {
            if (explicit_measures[x->slot])
                fail(number, "duplicate measure for '" + id + "'");
            explicit_measures[x->slot] = std::move(m);
        }
    }

    std::vector<MeasureTail> tails;
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        if (!rules[j])
            throw input_error("no measure given for family '" + space.family(j).id + "[*]'");
        tails.push_back({std::move(*rules[j]), std::move(exceptions[j])});
    }
    return ProbabilityFamily(space, std::move(explicit_measures), std::move(tails));
}

ProbabilityFamily read_family_file(const std::string& path, const MeasureSpace& space)
{
    return parse_family(slurp(path), space);
}

namespace {

std::string render_measure(const DiscreteMeasure& m)
{
    std::ostringstream os;
    std::size_t i = 1;
    for (const auto& [t, mass] : m.points()) {
        if (i > 1)
            os << ", ";
        os << 't' << i++ << '=' << format_rational_pq(t) << " mass=" << format_rational_pq(mass);
    }
    return os.str();
}

} // namespace

std::string render_family(const ProbabilityFamily& family, const MeasureSpace& space)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < space.explicit_count(); ++i)
        if (const auto& m = family.explicit_measures()[i])
            os << "P " << space.atom(i).id << " : " << render_measure(*m) << '\n';
    for (std::size_t j = 0; j < space.family_count(); ++j) {
        const MeasureTail& t = family.tails()[j];
        os << "P " << space.family(j).id << "[*] : " << render_measure(t.rule) << '\n';
        for (const auto& [n, m] : t.exceptions)
            os << "P " << space.family(j).id << '[' << n << "] : " << render_measure(m) << '\n';
    }
    return os.str();
}

} // namespace qnc

#include "roht/worldgen.hpp"

#include "roht/errors.hpp"
#include "roht/grammar.hpp"

#include "json.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace roht {

namespace {

// Uniform draw via modulo so byte-identical output does not depend on the
// standard library's distribution implementations.
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return n == 0 ? 0 : rng() % n; }

class NamePool {
public:
    explicit NamePool(std::mt19937_64& rng) : rng_(rng) {}

    // Capitalized pronounceable word, unique across the whole world.
    std::string word() {
        static const char* consonants[] = {"b", "d", "f", "g", "h", "k", "l", "m",
                                           "n", "p", "r", "s", "t", "v", "z"};
        static const char* vowels[] = {"a", "e", "i", "o", "u"};
        for (int attempt = 0; attempt < 10000; ++attempt) {
            const std::size_t syllables = 2 + pick(rng_, 2);
            std::string w;
            for (std::size_t s = 0; s < syllables; ++s) {
                w += consonants[pick(rng_, 15)];
                w += vowels[pick(rng_, 5)];
            }
            w[0] = static_cast<char>(w[0] - 'a' + 'A');
            if (used_.insert(w).second) return w;
        }
        throw GenError("name pool exhausted");
    }

private:
    std::mt19937_64& rng_;
    std::set<std::string> used_;
};

std::string pad4(int n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", n);
    return buf;
}

// 30% of each family goes to dev, spread evenly through the build order.
std::string split_for(int family_index) { return family_index % 10 < 3 ? "dev" : "train"; }

struct QuestionSink {
    Dataset* dataset;
    std::string prefix;
    int counter = 1;

    void add(const std::string& family, const std::string& question,
             std::vector<std::string> golds, const std::string& split) {
        DatasetQuestion q;
        q.id = prefix + pad4(counter++);
        q.question = question;
        q.golds = std::move(golds);
        q.split = split;
        q.family = family;
        dataset->questions.push_back(std::move(q));
    }
};

}  // namespace

GenSpec gen_spec_from_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("generation spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("generation spec must be a JSON object");
    GenSpec spec;
    const std::map<std::string, int*> fields = {
        {"countries", &spec.countries},
        {"cities_per_country", &spec.cities_per_country},
        {"mountains", &spec.mountains},
        {"shared_mountains", &spec.shared_mountains},
        {"rivers", &spec.rivers},
        {"films", &spec.films},
        {"artworks", &spec.artworks},
        {"hierarchy_artworks", &spec.hierarchy_artworks},
        {"comparisons", &spec.comparisons},
        {"verifications", &spec.verifications},
        {"unions", &spec.unions},
        {"trap_train_match", &spec.trap_train_match},
        {"trap_train_mismatch", &spec.trap_train_mismatch},
        {"trap_dev_match", &spec.trap_dev_match},
        {"trap_dev_mismatch", &spec.trap_dev_mismatch},
    };
    for (const auto& [key, value] : doc.items()) {
        auto it = fields.find(key);
        if (it == fields.end()) throw ValidationError("unknown generation spec key: " + key);
        if (!value.is_number_integer()) {
            throw ValidationError("generation spec key " + key + " must be an integer");
        }
        *it->second = value.get<int>();
    }
    return spec;
}

SyntheticWorld generate_synthetic_world(const GenSpec& spec, std::uint64_t seed) {
    if (spec.countries < 2) throw GenError("need at least 2 countries");
    if (spec.cities_per_country < 2) throw GenError("need at least 2 cities per country");
    if (spec.mountains < spec.countries || spec.mountains > 2 * spec.countries) {
        // Between 1 and 2 per country before sharing; sharing may add a third.
        throw GenError("mountain count must lie in [countries, 2*countries]");
    }
    if (spec.shared_mountains > spec.mountains) {
        throw GenError("cannot share more mountains than exist");
    }
    if (spec.rivers < 2) throw GenError("need at least 2 rivers");
    const int trap_total = spec.trap_train_match + spec.trap_train_mismatch +
                           spec.trap_dev_match + spec.trap_dev_mismatch;
    if (trap_total > spec.countries) {
        throw GenError("trap question counts exceed the country count");
    }

    std::mt19937_64 rng(seed);
    NamePool names(rng);

    // --- World model -------------------------------------------------------

    struct CityM {
        std::string name;
        int country;
    };
    struct MountainM {
        std::string name;
        long long height;
        std::vector<int> countries;
    };
    struct RiverM {
        std::string name;
        long long length;
    };
    struct PersonM {
        std::string name;
        int born;
        int died_city = -1;  // world-model fact; never becomes a KB relation
    };
    struct WorkM {
        std::string name;
        int maker;  // person index
    };

    std::vector<std::string> countries;
    for (int i = 0; i < spec.countries; ++i) countries.push_back(names.word());

    // Seat-equals-largest assignment is positional so the scheduler-suite
    // split composition is exact: matches first within train, then dev.
    const int train_cut = spec.trap_train_match + spec.trap_train_mismatch;
    auto seat_matches_largest = [&](int country) {
        if (country < spec.trap_train_match) return true;
        if (country < train_cut) return false;
        if (country < train_cut + spec.trap_dev_match) return true;
        if (country < trap_total) return false;
        return country % 2 == 0;  // beyond the trap pool: keep a rough balance
    };

    std::vector<CityM> cities;
    std::vector<int> seat_city(static_cast<std::size_t>(spec.countries));
    std::vector<int> largest_city(static_cast<std::size_t>(spec.countries));
    for (int c = 0; c < spec.countries; ++c) {
        const int first = static_cast<int>(cities.size());
        for (int k = 0; k < spec.cities_per_country; ++k) {
            cities.push_back({names.word(), c});
        }
        const int seat = first + static_cast<int>(pick(rng, 2));
        seat_city[static_cast<std::size_t>(c)] = seat;
        largest_city[static_cast<std::size_t>(c)] =
            seat_matches_largest(c) ? seat : first + (seat - first + 1) % 2;
    }

    std::set<long long> used_numbers;
    auto distinct_number = [&](long long lo, long long hi) {
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const long long v =
                lo + static_cast<long long>(pick(rng, static_cast<std::size_t>(hi - lo + 1)));
            if (used_numbers.insert(v).second) return v;
        }
        throw GenError("numeric range exhausted");
    };

    std::vector<MountainM> mountains;
    std::vector<std::vector<int>> country_mountains(
        static_cast<std::size_t>(spec.countries));
    for (int i = 0; i < spec.mountains; ++i) {
        MountainM m;
        m.name = "Mount " + names.word();
        m.height = distinct_number(1000, 8999);
        const int primary = i % spec.countries;
        m.countries.push_back(primary);
        country_mountains[static_cast<std::size_t>(primary)].push_back(i);
        mountains.push_back(std::move(m));
    }
    // A shared mountain also sits in a neighbour, capped at three mountains
    // per country so answer lists stay within the combination cap.
    std::set<std::pair<int, int>> shared_pairs;
    for (int s = 0; s < spec.shared_mountains; ++s) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const int i = static_cast<int>(pick(rng, mountains.size()));
            if (mountains[static_cast<std::size_t>(i)].countries.size() > 1) continue;
            const int primary = mountains[static_cast<std::size_t>(i)].countries[0];
            const int other = static_cast<int>(pick(rng, static_cast<std::size_t>(spec.countries)));
            if (other == primary) continue;
            if (country_mountains[static_cast<std::size_t>(other)].size() >= 3) continue;
            mountains[static_cast<std::size_t>(i)].countries.push_back(other);
            country_mountains[static_cast<std::size_t>(other)].push_back(i);
            shared_pairs.insert({std::min(primary, other), std::max(primary, other)});
            break;
        }
    }

    std::vector<RiverM> rivers;
    for (int i = 0; i < spec.rivers; ++i) {
        rivers.push_back({names.word() + " River", distinct_number(500, 6999)});
    }

    std::vector<PersonM> persons;
    auto new_person = [&]() {
        PersonM p;
        p.name = names.word() + " " + names.word();
        p.born = static_cast<int>(pick(rng, static_cast<std::size_t>(spec.countries)));
        persons.push_back(std::move(p));
        return static_cast<int>(persons.size()) - 1;
    };

    std::vector<WorkM> films;
    for (int i = 0; i < spec.films; ++i) films.push_back({names.word(), new_person()});
    std::vector<WorkM> artworks;
    for (int i = 0; i < spec.artworks; ++i) artworks.push_back({names.word(), new_person()});
    std::vector<WorkM> hierarchy_artworks;
    for (int i = 0; i < spec.hierarchy_artworks; ++i) {
        const int maker = new_person();
        persons[static_cast<std::size_t>(maker)].died_city =
            static_cast<int>(pick(rng, cities.size()));
        hierarchy_artworks.push_back({names.word(), maker});
    }

    // --- Knowledge base ------------------------------------------------------

    SyntheticWorld world;
    KnowledgeBase& kb = world.kb;
    for (const char* concept_name : {"mountain", "river", "city", "country", "person",
                                     "film", "artwork"}) {
        kb.concepts.push_back({std::string("c_") + concept_name, concept_name, std::nullopt});
    }
    int next_entity = 1;
    auto add_entity = [&](const std::string& name, const std::string& concept_name) {
        std::string id = "e" + pad4(next_entity++);
        kb.entities.push_back({id, name, {"c_" + concept_name}});
        return id;
    };
    std::vector<std::string> country_ids, city_ids, mountain_ids, river_ids, person_ids,
        film_ids, artwork_ids, hierarchy_ids;
    for (const std::string& name : countries) country_ids.push_back(add_entity(name, "country"));
    for (const CityM& c : cities) city_ids.push_back(add_entity(c.name, "city"));
    for (const MountainM& m : mountains) mountain_ids.push_back(add_entity(m.name, "mountain"));
    for (const RiverM& r : rivers) river_ids.push_back(add_entity(r.name, "river"));
    for (const PersonM& p : persons) person_ids.push_back(add_entity(p.name, "person"));
    for (const WorkM& f : films) film_ids.push_back(add_entity(f.name, "film"));
    for (const WorkM& a : artworks) artwork_ids.push_back(add_entity(a.name, "artwork"));
    for (const WorkM& a : hierarchy_artworks) {
        hierarchy_ids.push_back(add_entity(a.name, "artwork"));
    }

    for (std::size_t i = 0; i < mountains.size(); ++i) {
        for (int c : mountains[i].countries) {
            kb.relations.push_back(
                {mountain_ids[i], "located_in", country_ids[static_cast<std::size_t>(c)]});
        }
    }
    for (std::size_t i = 0; i < cities.size(); ++i) {
        kb.relations.push_back(
            {city_ids[i], "located_in", country_ids[static_cast<std::size_t>(cities[i].country)]});
    }
    for (int c = 0; c < spec.countries; ++c) {
        kb.relations.push_back({country_ids[static_cast<std::size_t>(c)], "seat_of_government",
                                city_ids[static_cast<std::size_t>(seat_city[static_cast<std::size_t>(c)])]});
    }
    for (std::size_t i = 0; i < films.size(); ++i) {
        kb.relations.push_back(
            {film_ids[i], "directed_by", person_ids[static_cast<std::size_t>(films[i].maker)]});
    }
    for (std::size_t i = 0; i < artworks.size(); ++i) {
        kb.relations.push_back(
            {artwork_ids[i], "created_by", person_ids[static_cast<std::size_t>(artworks[i].maker)]});
    }
    for (std::size_t i = 0; i < hierarchy_artworks.size(); ++i) {
        kb.relations.push_back({hierarchy_ids[i], "created_by",
                                person_ids[static_cast<std::size_t>(hierarchy_artworks[i].maker)]});
    }
    for (std::size_t i = 0; i < persons.size(); ++i) {
        kb.relations.push_back(
            {person_ids[i], "born_in", country_ids[static_cast<std::size_t>(persons[i].born)]});
    }
    auto quantity = [](long long value, const std::string& unit) {
        AttributeLiteral lit;
        lit.numeric = true;
        lit.number = static_cast<double>(value);
        lit.unit = unit;
        return lit;
    };
    for (std::size_t i = 0; i < mountains.size(); ++i) {
        kb.attributes.push_back({mountain_ids[i], "height", quantity(mountains[i].height, "metre")});
    }
    for (std::size_t i = 0; i < rivers.size(); ++i) {
        kb.attributes.push_back({river_ids[i], "length", quantity(rivers[i].length, "km")});
    }
    kb.units.declare("km", "metre", 1000.0);

    // --- Corpus (one sentence per paragraph, title = subject) ----------------

    Corpus& corpus = world.corpus;
    int next_para = 1;
    auto add_para = [&](const std::string& title, const std::string& text) {
        corpus.paragraphs.push_back({next_para++, title, text});
    };
    for (int c = 0; c < spec.countries; ++c) {
        const std::string& name = countries[static_cast<std::size_t>(c)];
        add_para(name, count_sentence(
                           static_cast<long long>(country_mountains[static_cast<std::size_t>(c)].size()),
                           "mountains", name));
        add_para(name, count_sentence(spec.cities_per_country, "cities", name));
        add_para(name, largest_city_sentence(
                           name, cities[static_cast<std::size_t>(largest_city[static_cast<std::size_t>(c)])].name));
    }
    for (const CityM& c : cities) {
        add_para(c.name, located_sentence(c.name, "city", countries[static_cast<std::size_t>(c.country)]));
    }
    for (const MountainM& m : mountains) {
        add_para(m.name, height_sentence(m.name, m.height));
        for (int c : m.countries) {
            add_para(m.name, located_sentence(m.name, "mountain", countries[static_cast<std::size_t>(c)]));
        }
    }
    for (const RiverM& r : rivers) add_para(r.name, length_sentence(r.name, r.length));
    for (const PersonM& p : persons) {
        add_para(p.name, born_sentence(p.name, countries[static_cast<std::size_t>(p.born)]));
    }
    for (const WorkM& f : films) {
        add_para(f.name, directed_sentence(f.name, persons[static_cast<std::size_t>(f.maker)].name));
    }
    for (const WorkM& a : artworks) {
        add_para(a.name, created_sentence(a.name, persons[static_cast<std::size_t>(a.maker)].name));
    }
    for (const WorkM& a : hierarchy_artworks) {
        add_para(a.name, created_sentence(a.name, persons[static_cast<std::size_t>(a.maker)].name));
        add_para(a.name, death_sentence(
                             a.name, cities[static_cast<std::size_t>(
                                                persons[static_cast<std::size_t>(a.maker)].died_city)].name));
    }

    // --- Main dataset ---------------------------------------------------------

    QuestionSink main_sink{&world.questions, "q"};
    auto country_name = [&](int c) { return countries[static_cast<std::size_t>(c)]; };

    {  // multihop
        int i = 0;
        auto add = [&](const std::string& question, std::vector<std::string> golds) {
            main_sink.add("multihop", question, std::move(golds), split_for(i++));
        };
        for (const MountainM& m : mountains) {
            add(q_attribute("height", m.name), {std::to_string(m.height) + " metre"});
        }
        for (const RiverM& r : rivers) {
            add(q_attribute("length", r.name), {std::to_string(r.length) + " km"});
        }
        for (const MountainM& m : mountains) {
            std::vector<std::string> golds;
            for (int c : m.countries) golds.push_back(country_name(c));
            add(q_located_country(m.name), std::move(golds));
        }
        for (const CityM& c : cities) {
            add(q_located_country(c.name), {country_name(c.country)});
        }
        for (const WorkM& f : films) {
            add(q_directed(f.name), {persons[static_cast<std::size_t>(f.maker)].name});
        }
        for (const WorkM& a : artworks) {
            add(q_created(a.name), {persons[static_cast<std::size_t>(a.maker)].name});
        }
        for (const PersonM& p : persons) {
            add(q_born_country(p.name), {country_name(p.born)});
        }
        for (const WorkM& f : films) {
            add(q_maker_born_country("director", f.name),
                {country_name(persons[static_cast<std::size_t>(f.maker)].born)});
        }
        for (const WorkM& a : artworks) {
            add(q_maker_born_country("creator", a.name),
                {country_name(persons[static_cast<std::size_t>(a.maker)].born)});
        }
        // Set-valued leaves as standalone questions, so their program shapes
        // are exercised during precision-table building.
        for (int c = 0; c < spec.countries; ++c) {
            std::vector<std::string> golds;
            for (int m : country_mountains[static_cast<std::size_t>(c)]) {
                golds.push_back(mountains[static_cast<std::size_t>(m)].name);
            }
            add(q_things_in("mountains", country_name(c)), std::move(golds));
        }
        for (int c = 0; c < spec.countries; ++c) {
            std::vector<std::string> golds;
            for (std::size_t ci = 0; ci < cities.size(); ++ci) {
                if (cities[ci].country == c) golds.push_back(cities[ci].name);
            }
            add(q_things_in("cities", country_name(c)), std::move(golds));
        }
    }

    {  // comparison
        for (int i = 0; i < spec.comparisons; ++i) {
            const bool use_rivers = i % 4 == 3;
            std::string question;
            std::string winner;
            if (use_rivers) {
                const std::size_t a = pick(rng, rivers.size());
                std::size_t b = pick(rng, rivers.size() - 1);
                if (b >= a) ++b;
                question = q_compare("longer", rivers[a].name, rivers[b].name);
                winner = rivers[rivers[a].length > rivers[b].length ? a : b].name;
            } else {
                const std::size_t a = pick(rng, mountains.size());
                std::size_t b = pick(rng, mountains.size() - 1);
                if (b >= a) ++b;
                question = q_compare("higher", mountains[a].name, mountains[b].name);
                winner = mountains[mountains[a].height > mountains[b].height ? a : b].name;
            }
            main_sink.add("comparison", question, {winner}, split_for(i));
        }
    }

    {  // logical: every shared-country pair once (intersection), then unions
        int i = 0;
        for (const auto& [c1, c2] : shared_pairs) {
            std::vector<std::string> golds;
            for (int m : country_mountains[static_cast<std::size_t>(c1)]) {
                const auto& in = mountains[static_cast<std::size_t>(m)].countries;
                if (std::find(in.begin(), in.end(), c2) != in.end()) {
                    golds.push_back(mountains[static_cast<std::size_t>(m)].name);
                }
            }
            main_sink.add("logical", q_in_both(country_name(c1), country_name(c2)),
                          std::move(golds), split_for(i++));
        }
        for (int u = 0; u < spec.unions; ++u) {
            const int c1 = static_cast<int>(pick(rng, static_cast<std::size_t>(spec.countries)));
            int c2 = static_cast<int>(pick(rng, static_cast<std::size_t>(spec.countries - 1)));
            if (c2 >= c1) ++c2;
            std::set<std::string> golds;
            for (int c : {c1, c2}) {
                for (int m : country_mountains[static_cast<std::size_t>(c)]) {
                    golds.insert(mountains[static_cast<std::size_t>(m)].name);
                }
            }
            main_sink.add("logical", q_in_either(country_name(c1), country_name(c2)),
                          {golds.begin(), golds.end()}, split_for(i++));
        }
    }

    {  // count
        int i = 0;
        for (int c = 0; c < spec.countries; ++c) {
            main_sink.add("count", q_count_in("mountains", country_name(c)),
                          {std::to_string(country_mountains[static_cast<std::size_t>(c)].size())},
                          split_for(i++));
        }
        for (int c = 0; c < spec.countries; ++c) {
            main_sink.add("count", q_count_in("cities", country_name(c)),
                          {std::to_string(spec.cities_per_country)}, split_for(i++));
        }
    }

    {  // verify
        for (int i = 0; i < spec.verifications; ++i) {
            const MountainM& m = mountains[static_cast<std::size_t>(i) % mountains.size()];
            const bool greater = i % 2 == 0;
            const bool truth = pick(rng, 2) == 0;
            const long long delta = 1 + static_cast<long long>(pick(rng, 200));
            // greater&yes or less&no probe below the height; otherwise above.
            const long long value = (greater == truth) ? m.height - delta : m.height + delta;
            main_sink.add("verify",
                          q_verify_height(m.name, greater ? "greater" : "less", value),
                          {truth ? "yes" : "no"}, split_for(i));
        }
    }

    {  // selectamong
        int i = 0;
        for (const char* extreme : {"highest", "lowest"}) {
            const bool want_max = std::string(extreme) == "highest";
            for (int c = 0; c < spec.countries; ++c) {
                const std::vector<int>& members = country_mountains[static_cast<std::size_t>(c)];
                int best = members.front();
                for (int m : members) {
                    const bool better = want_max
                                            ? mountains[static_cast<std::size_t>(m)].height >
                                                  mountains[static_cast<std::size_t>(best)].height
                                            : mountains[static_cast<std::size_t>(m)].height <
                                                  mountains[static_cast<std::size_t>(best)].height;
                    if (better) best = m;
                }
                main_sink.add("selectamong", q_extreme_mountain(country_name(c), extreme),
                              {mountains[static_cast<std::size_t>(best)].name}, split_for(i++));
            }
        }
    }

    // --- Hierarchy suite -------------------------------------------------------
    // The middle hop (where the creator died) is stated only in the corpus, so
    // answering the composite question requires the generated sub-question.

    QuestionSink hier_sink{&world.hierarchy_suite, "h"};
    for (std::size_t i = 0; i < hierarchy_artworks.size() && i < 10; ++i) {
        hier_sink.add("hierarchy", q_created(hierarchy_artworks[i].name),
                      {persons[static_cast<std::size_t>(hierarchy_artworks[i].maker)].name},
                      "train");
    }
    for (std::size_t i = 0; i < cities.size() && i < 10; ++i) {
        hier_sink.add("hierarchy", q_located_country(cities[i].name),
                      {country_name(cities[i].country)}, "train");
    }
    for (const WorkM& a : hierarchy_artworks) {
        const PersonM& maker = persons[static_cast<std::size_t>(a.maker)];
        const CityM& died = cities[static_cast<std::size_t>(maker.died_city)];
        hier_sink.add("hierarchy", q_creator_death_country(a.name),
                      {country_name(died.country)}, "dev");
    }

    // --- Scheduler suite ---------------------------------------------------------
    // The "largest city" parse answers with the seat of government, which is
    // correct for only part of the countries; reliable attribute and set
    // questions accompany it so the suite has both kinds of program shape.

    QuestionSink sched_sink{&world.scheduler_suite, "s"};
    auto add_trap = [&](int c, const std::string& split) {
        sched_sink.add("trap", q_largest_city(country_name(c)),
                       {cities[static_cast<std::size_t>(largest_city[static_cast<std::size_t>(c)])].name},
                       split);
    };
    for (int c = 0; c < train_cut; ++c) add_trap(c, "train");
    for (int c = train_cut; c < trap_total; ++c) add_trap(c, "dev");
    for (std::size_t i = 0; i < mountains.size() && i < 10; ++i) {
        sched_sink.add("attribute", q_attribute("height", mountains[i].name),
                       {std::to_string(mountains[i].height) + " metre"}, "train");
    }
    for (int c = 0; c < spec.countries && c < 10; ++c) {
        std::vector<std::string> golds;
        for (int m : country_mountains[static_cast<std::size_t>(c)]) {
            golds.push_back(mountains[static_cast<std::size_t>(m)].name);
        }
        sched_sink.add("set", q_things_in("mountains", country_name(c)), std::move(golds),
                       "train");
    }
    for (std::size_t i = 10; i < mountains.size() && i < 13; ++i) {
        sched_sink.add("attribute", q_attribute("height", mountains[i].name),
                       {std::to_string(mountains[i].height) + " metre"}, "dev");
    }
    for (int c = 10; c < spec.countries && c < 13; ++c) {
        std::vector<std::string> golds;
        for (int m : country_mountains[static_cast<std::size_t>(c)]) {
            golds.push_back(mountains[static_cast<std::size_t>(m)].name);
        }
        sched_sink.add("set", q_things_in("mountains", country_name(c)), std::move(golds),
                       "dev");
    }

    return world;
}

}  // namespace roht

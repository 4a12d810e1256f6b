#include "lsss/simcloud.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "lsss/errors.hpp"

namespace lsss {

namespace {

const char* kind_name(Event::Kind k) {
    switch (k) {
        case Event::Kind::distribute: return "distribute";
        case Event::Kind::remove: return "remove";
        case Event::Kind::reconstruct: return "reconstruct";
        case Event::Kind::snapshot: return "snapshot";
    }
    return "?";
}

struct Prepared {
    Msp scheme;               // the dealer's scheme
    AccessStructure gamma;    // the structure it realizes
};

Prepared prepare(const Scenario& sc) {
    if (sc.n < 1 || sc.n > 20) throw validation_error("scenario needs 1 <= n <= 20 servers");
    if (sc.t && sc.msp) throw validation_error("scenario must pick threshold or explicit scheme");
    if (sc.t) {
        if (*sc.t < 1 || *sc.t > sc.n) throw validation_error("scenario threshold out of range");
        return Prepared{Msp::shamir(*sc.t, sc.n, sc.p), AccessStructure::threshold(*sc.t, sc.n)};
    }
    if (!sc.msp) throw validation_error("scenario needs a threshold t or an explicit msp");
    if (sc.msp->participants() != sc.n) {
        throw validation_error("scenario msp participant count mismatch");
    }
    return Prepared{*sc.msp, realized_structure(*sc.msp)};
}

// Static checks over the whole event list; throws before anything executes.
void validate_events(const Scenario& sc, const Prepared& prep) {
    bool distributed = false;
    bool relocatable = prep.scheme.ideal();  // lc keeps this; ps/is/cs end it
    SubsetMask removed = 0;
    std::size_t distribute_count = 0;
    for (std::size_t i = 0; i < sc.events.size(); ++i) {
        const Event& e = sc.events[i];
        switch (e.kind) {
            case Event::Kind::distribute:
                if (++distribute_count > 1) {
                    throw validation_error("scenario has more than one distribute event");
                }
                distributed = true;
                break;
            case Event::Kind::remove: {
                if (!distributed) throw validation_error("remove before distribute");
                if (e.servers == 0) break;  // no-op removal
                if ((e.servers & ~full_mask(sc.n)) != 0 || (e.servers & removed) != 0) {
                    throw validation_error("remove names a dead or unknown server");
                }
                if (prep.gamma.is_authorized(e.servers | removed)) {
                    throw unauthorized_error("cannot remove an authorized server set");
                }
                if (!relocatable) {
                    throw validation_error(
                        "only the lc method leaves storage removable again; "
                        "ps/is/cs removal must come last");
                }
                removed |= e.servers;
                if (removed == full_mask(sc.n)) {
                    throw validation_error("cannot remove every server");
                }
                if (e.method != Method::lc) relocatable = false;
                break;
            }
            case Event::Kind::reconstruct: {
                if (!distributed) throw validation_error("reconstruct before distribute");
                if ((e.servers & ~full_mask(sc.n)) != 0 || (e.servers & removed) != 0) {
                    throw validation_error("reconstruct references a dead or unknown server");
                }
                const std::uint64_t limit = sc.material ? sc.z : 1;
                if (e.secret_index >= limit) {
                    throw validation_error(
                        "secret index out of range (analytic mode stores one representative; "
                        "use material mode for the rest)");
                }
                break;
            }
            case Event::Kind::snapshot:
                if (!distributed) throw validation_error("snapshot before distribute");
                break;
        }
    }
}

struct SimState {
    // current reconstruction scheme and who owns which participant slot
    Msp scheme;
    std::vector<int> participant_of;  // original server -> participant in scheme, -1 dead
    std::vector<bool> live;
    std::vector<std::size_t> granted_rows;             // ps: rows public to every reader
    std::vector<std::vector<std::size_t>> row_holders; // cs: per scheme row, original holders
    // per secret: value of every scheme row
    std::vector<std::vector<Int>> values;
    // storage accounting, per secret, per original server / public site
    std::vector<std::uint64_t> elements;
    std::uint64_t public_elements = 0;
};

StorageMetrics snapshot_metrics(const Scenario& sc, const SimState& st) {
    StorageMetrics sm;
    sm.share_bits = sc.share_bits;
    sm.secret_count = sc.z;
    for (int s = 0; s < sc.n; ++s) {
        if (!st.live[s]) continue;
        sm.server_elements += st.elements[s];
        sm.max_server_elements = std::max(sm.max_server_elements, st.elements[s]);
    }
    sm.public_elements = st.public_elements;
    return sm;
}

}  // namespace

SimReport run(const Scenario& scenario) {
    const Prepared prep = prepare(scenario);
    validate_events(scenario, prep);
    if (scenario.z < 1) throw validation_error("scenario needs z >= 1");

    SeededRng rng(scenario.seed);
    SimReport report;
    SimState st{prep.scheme, {}, std::vector<bool>(scenario.n, true),
                {},          {}, {},
                std::vector<std::uint64_t>(scenario.n, 0), 0};
    for (int i = 0; i < scenario.n; ++i) st.participant_of.push_back(i);
    const std::uint64_t stored = scenario.material ? scenario.z : 1;

    for (std::size_t idx = 0; idx < scenario.events.size(); ++idx) {
        const Event& e = scenario.events[idx];
        EventRecord rec{idx, kind_name(e.kind), 0};
        switch (e.kind) {
            case Event::Kind::distribute: {
                for (std::uint64_t s = 0; s < stored; ++s) {
                    const Int secret = rng.element(st.scheme.field());
                    std::vector<Int> tail(st.scheme.width() - 1);
                    for (auto& r : tail) r = rng.element(st.scheme.field());
                    st.values.push_back(row_values(st.scheme, secret, tail));
                    report.distributed_secrets.push_back(secret);
                }
                for (int s = 0; s < scenario.n; ++s) {
                    st.elements[s] = st.scheme.rows_of(s).size();
                }
                break;
            }
            case Event::Kind::remove: {
                if (e.servers == 0) break;
                // translate to the current scheme's participant space
                SubsetMask q = 0;
                for (int s : mask_members(e.servers)) q |= SubsetMask(1) << st.participant_of[s];
                std::vector<int> live_servers;  // original ids of current participants
                live_servers.resize(st.scheme.participants());
                for (int s = 0; s < scenario.n; ++s) {
                    if (st.live[s]) live_servers[st.participant_of[s]] = s;
                }

                std::optional<RelocationOutcome> out;
                std::uint64_t moved_elements = 0;  // per secret
                std::optional<AccessStructure> gamma;  // cs only, shared across secrets
                if (e.method == Method::cs) gamma = realized_structure(st.scheme);
                std::vector<std::vector<std::vector<Int>>> new_values_all;
                for (std::uint64_t s = 0; s < stored; ++s) {
                    ShareVector sv;
                    sv.by_participant.resize(st.scheme.participants());
                    for (std::size_t r = 0; r < st.scheme.row_count(); ++r) {
                        sv.by_participant[st.scheme.owner_of(r)].push_back(st.values[s][r]);
                    }
                    switch (e.method) {
                        case Method::lc: out = relocate_lc(st.scheme, q, sv); break;
                        case Method::ps: out = relocate_ps(st.scheme, q, sv); break;
                        case Method::is: out = relocate_is(st.scheme, q, sv); break;
                        case Method::cs: out = relocate_cs(st.scheme, q, sv, *gamma); break;
                    }
                    // new per-row values of the outcome scheme
                    std::vector<std::vector<Int>> per_server = out->server_shares;
                    new_values_all.push_back(std::move(per_server));
                }

                const auto& o = *out;
                const std::uint64_t survivors = o.index_map.size();
                switch (e.method) {
                    case Method::lc:
                    case Method::is: moved_elements = o.q_rows.size() * survivors; break;
                    case Method::ps: moved_elements = o.q_rows.size(); break;
                    case Method::cs:
                        for (const auto& h : o.replica_holders) moved_elements += h.size();
                        break;
                }
                rec.bytes_moved = moved_elements * scenario.share_bits * scenario.z;

                // fold the outcome back into the state
                for (int s : mask_members(e.servers)) {
                    st.live[s] = false;
                    st.elements[s] = 0;
                }

                std::vector<std::uint64_t> new_elements(scenario.n, 0);
                for (std::size_t i = 0; i < o.index_map.size(); ++i) {
                    new_elements[live_servers[o.index_map[i]]] = 0;
                }
                switch (e.method) {
                    case Method::lc: {
                        st.scheme = o.scheme;
                        st.values.clear();
                        for (auto& per_server : new_values_all) {
                            std::vector<Int> flat(per_server.size());
                            for (std::size_t i = 0; i < per_server.size(); ++i) {
                                flat[i] = per_server[i][0];
                            }
                            st.values.push_back(std::move(flat));
                        }
                        break;
                    }
                    case Method::is: {
                        st.scheme = o.scheme;
                        st.values.clear();
                        for (std::uint64_t s = 0; s < stored; ++s) {
                            std::vector<Int> flat(st.scheme.row_count());
                            for (std::size_t i = 0; i < new_values_all[s].size(); ++i) {
                                const auto rows = st.scheme.rows_of(static_cast<int>(i));
                                for (std::size_t j = 0; j < rows.size(); ++j) {
                                    flat[rows[j]] = new_values_all[s][i][j];
                                }
                            }
                            st.values.push_back(std::move(flat));
                        }
                        break;
                    }
                    case Method::ps: {
                        // scheme and values stay; Q's rows become public
                        st.granted_rows.insert(st.granted_rows.end(), o.q_rows.begin(),
                                               o.q_rows.end());
                        st.public_elements += o.q_rows.size();
                        break;
                    }
                    case Method::cs: {
                        st.row_holders.assign(st.scheme.row_count(), {});
                        for (std::size_t j = 0; j < o.q_rows.size(); ++j) {
                            for (int holder : o.replica_holders[j]) {
                                st.row_holders[o.q_rows[j]].push_back(
                                    static_cast<std::size_t>(live_servers[o.index_map[holder]]));
                            }
                        }
                        break;
                    }
                }
                if (e.method == Method::lc || e.method == Method::is) {
                    for (std::size_t i = 0; i < o.index_map.size(); ++i) {
                        st.participant_of[live_servers[o.index_map[i]]] = static_cast<int>(i);
                    }
                    for (int s = 0; s < scenario.n; ++s) {
                        if (!st.live[s]) st.participant_of[s] = -1;
                    }
                }
                for (std::size_t i = 0; i < o.server_shares.size(); ++i) {
                    new_elements[live_servers[o.index_map[i]]] = o.server_shares[i].size();
                }
                for (int s = 0; s < scenario.n; ++s) {
                    if (st.live[s]) st.elements[s] = new_elements[s];
                }
                break;
            }
            case Event::Kind::reconstruct: {
                ReconstructionRecord rr{idx, false, 0, ""};
                // rows reachable by the named servers under the current recipe
                SubsetMask pmask = 0;
                for (int s : mask_members(e.servers)) {
                    pmask |= SubsetMask(1) << st.participant_of[s];
                }
                auto rows = st.scheme.rows_of_set(pmask);
                rows.insert(rows.end(), st.granted_rows.begin(), st.granted_rows.end());
                if (!st.row_holders.empty()) {
                    for (std::size_t r = 0; r < st.row_holders.size(); ++r) {
                        const bool held =
                            std::any_of(st.row_holders[r].begin(), st.row_holders[r].end(),
                                        [&](std::size_t h) { return e.servers >> h & 1; });
                        if (held) rows.push_back(r);
                    }
                }
                std::sort(rows.begin(), rows.end());
                rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
                const auto alpha =
                    st.scheme.matrix().select_rows(rows).solve_in_span(st.scheme.target());
                if (!alpha) {
                    rr.refusal = "unauthorized set";
                } else {
                    Int acc = 0;
                    const auto& vals = st.values[e.secret_index];
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                        acc += (*alpha)[i] * vals[rows[i]];
                    }
                    rr.success = true;
                    rr.value = st.scheme.field().reduce(acc);
                }
                report.reconstructions.push_back(std::move(rr));
                break;
            }
            case Event::Kind::snapshot:
                report.snapshots.push_back(snapshot_metrics(scenario, st));
                break;
        }
        report.events.push_back(std::move(rec));
    }
    return report;
}

std::string SimReport::to_csv() const {
    std::ostringstream out;
    out << "snapshot,index,server_elements,public_elements,max_server_elements,L_bits,L_MiB,rho\n";
    char buf[64];
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const auto& s = snapshots[i];
        std::snprintf(buf, sizeof buf, "%.4f", s.total_mib());
        out << "snapshot," << i << "," << s.server_elements << "," << s.public_elements << ","
            << s.max_server_elements << "," << s.total_bits() << "," << buf << ",1/"
            << s.rho_inverse() << "\n";
    }
    out << "event,index,kind,bytes_moved_bits\n";
    for (const auto& e : events) {
        out << "event," << e.event_index << "," << e.kind << "," << e.bytes_moved << "\n";
    }
    out << "reconstruct,event_index,status,value_or_reason\n";
    for (const auto& r : reconstructions) {
        out << "reconstruct," << r.event_index << ","
            << (r.success ? "ok," + r.value.str() : "refused," + r.refusal) << "\n";
    }
    return out.str();
}

namespace {

SimReport sweep_point(int n, int t, std::uint64_t share_bits, std::uint64_t z, Method method,
                      int m) {
    Scenario sc;
    sc.n = n;
    sc.t = t;
    sc.p = 65521;  // 16-bit prime
    sc.share_bits = share_bits;
    sc.z = z;
    sc.seed = 1;
    sc.events.push_back(Event{Event::Kind::distribute, 0, Method::lc, 0});
    if (m > 0) {
        const SubsetMask q = full_mask(n) & ~full_mask(n - m);  // last m servers
        sc.events.push_back(Event{Event::Kind::remove, q, method, 0});
    }
    sc.events.push_back(Event{Event::Kind::snapshot, 0, Method::lc, 0});
    return run(sc);
}

}  // namespace

std::string sweep_fig1(int n, int t, std::uint64_t share_bits, std::uint64_t z) {
    std::ostringstream out;
    out << "method,m,L_bits,L_MiB,rho\n";
    char buf[64];
    for (Method method : {Method::lc, Method::ps, Method::is, Method::cs}) {
        for (int m = 0; m < t; ++m) {
            const auto rep = sweep_point(n, t, share_bits, z, method, m);
            const auto& s = rep.snapshots.at(0);
            std::snprintf(buf, sizeof buf, "%.4f", s.total_mib());
            out << method_name(method) << "," << m << "," << s.total_bits() << "," << buf << ","
                << (s.rho_inverse() == 1
                        ? std::string("1")
                        : "1/" + std::to_string(s.rho_inverse()))
                << "\n";
        }
    }
    return out.str();
}

std::string sweep_fig1_plot_data(int n, int t, std::uint64_t share_bits, std::uint64_t z) {
    const Method order[] = {Method::ps, Method::is, Method::cs, Method::lc};
    std::vector<std::vector<StorageMetrics>> table(4);
    for (int i = 0; i < 4; ++i) {
        for (int m = 0; m < t; ++m) {
            table[i].push_back(sweep_point(n, t, share_bits, z, order[i], m).snapshots.at(0));
        }
    }
    std::ostringstream out;
    char buf[64];
    out << "# block 0: total storage (MiB) by removed-server count\n";
    out << "# m ps is cs lc\n";
    for (int m = 0; m < t; ++m) {
        out << m;
        for (int i = 0; i < 4; ++i) {
            std::snprintf(buf, sizeof buf, " %.4f", table[i][m].total_mib());
            out << buf;
        }
        out << "\n";
    }
    out << "\n\n# block 1: information rate by removed-server count\n";
    out << "# m ps is cs lc\n";
    for (int m = 0; m < t; ++m) {
        out << m;
        for (int i = 0; i < 4; ++i) {
            std::snprintf(buf, sizeof buf, " %.6f", table[i][m].rho());
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

Scenario Scenario::from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("scenario json: ") + e.what());
    }
    Scenario sc;
    try {
        sc.n = j.at("n").get<int>();
        if (j.contains("t")) sc.t = j.at("t").get<int>();
        if (j.contains("msp")) sc.msp = Msp::from_text(j.at("msp").get<std::string>());
        if (j.contains("p")) {
            sc.p = j.at("p").is_string() ? Int(j.at("p").get<std::string>())
                                         : Int(j.at("p").get<std::uint64_t>());
        } else if (sc.msp) {
            sc.p = sc.msp->field().modulus();
        }
        sc.share_bits = j.value("share_bits", std::uint64_t(16));
        sc.z = j.value("z", std::uint64_t(1));
        sc.seed = j.at("seed").get<std::uint64_t>();
        sc.material = j.value("material", false);
        for (const auto& je : j.at("events")) {
            Event e;
            const std::string kind = je.at("kind").get<std::string>();
            auto servers_of = [&]() {
                std::vector<int> v;
                for (int s : je.at("servers").get<std::vector<int>>()) v.push_back(s - 1);
                return mask_of(v);
            };
            if (kind == "distribute") {
                e.kind = Event::Kind::distribute;
            } else if (kind == "remove") {
                e.kind = Event::Kind::remove;
                e.servers = servers_of();
                e.method = method_from_name(je.at("method").get<std::string>());
            } else if (kind == "reconstruct") {
                e.kind = Event::Kind::reconstruct;
                e.servers = servers_of();
                e.secret_index = je.value("secret", std::uint64_t(0));
            } else if (kind == "snapshot") {
                e.kind = Event::Kind::snapshot;
            } else {
                throw validation_error("scenario json: unknown event kind '" + kind + "'");
            }
            sc.events.push_back(e);
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("scenario json: ") + e.what());
    }
    return sc;
}

std::string Scenario::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    if (t) j["t"] = *t;
    if (msp) j["msp"] = msp->to_text();
    j["p"] = p.str();
    j["share_bits"] = share_bits;
    j["z"] = z;
    j["seed"] = seed;
    j["material"] = material;
    j["events"] = nlohmann::json::array();
    for (const auto& e : events) {
        nlohmann::json je;
        je["kind"] = kind_name(e.kind);
        if (e.kind == Event::Kind::remove || e.kind == Event::Kind::reconstruct) {
            std::vector<int> servers;
            for (int s : mask_members(e.servers)) servers.push_back(s + 1);
            je["servers"] = servers;
        }
        if (e.kind == Event::Kind::remove) je["method"] = method_name(e.method);
        if (e.kind == Event::Kind::reconstruct) je["secret"] = e.secret_index;
        j["events"].push_back(je);
    }
    return j.dump(2);
}

}  // namespace lsss

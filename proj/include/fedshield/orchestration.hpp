#pragma once

#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedshield/aggregation.hpp"
#include "fedshield/attacks.hpp"
#include "fedshield/config.hpp"
#include "fedshield/data.hpp"
#include "fedshield/group_p256.hpp"
#include "fedshield/ibi.hpp"
#include "fedshield/metrics.hpp"
#include "fedshield/nn.hpp"
#include "fedshield/wire.hpp"

namespace fedshield::orch {

using AuthGroup = P256Group;
using Logger = std::function<void(const std::string&)>;

enum class ClientStatus { pending_auth, active, disconnected, banned };

inline std::string to_string(ClientStatus s) {
    switch (s) {
        case ClientStatus::pending_auth: return "pending_auth";
        case ClientStatus::active: return "active";
        case ClientStatus::disconnected: return "disconnected";
        case ClientStatus::banned: return "banned";
    }
    return "?";
}

struct ClientRecord {
    std::string id;
    ClientStatus status = ClientStatus::pending_auth;
    int strikes = 0;
    int shard_index = -1;
    bool malicious = false;
};

// Append-only within an experiment.
class Denylist {
public:
    void add(const std::string& id) { ids_.insert(id); }
    bool contains(const std::string& id) const { return ids_.count(id) > 0; }
    std::size_t size() const { return ids_.size(); }
    const std::set<std::string>& ids() const { return ids_; }

private:
    std::set<std::string> ids_;
};

struct PolicyOutcome {
    std::vector<std::string> flagged;
    std::vector<std::string> disconnect;
};

// Flag rule per aggregation evidence, then a strike counter: a client
// flagged `strike_threshold` rounds in a row is forced out; any clean round
// resets its counter.
inline PolicyOutcome apply_disconnection_policy(std::map<std::string, ClientRecord>& records,
                                                const agg::FlagReport& report, config::Rule rule,
                                                const config::ExperimentConfig& cfg) {
    PolicyOutcome out;
    std::vector<double> scores;
    double median = 0.0;
    if (rule == config::Rule::krum) {
        for (const auto& c : report.clients) scores.push_back(c.krum_score);
        std::sort(scores.begin(), scores.end());
        if (!scores.empty()) {
            const std::size_t mid = scores.size() / 2;
            median = scores.size() % 2 ? scores[mid] : 0.5 * (scores[mid - 1] + scores[mid]);
        }
    }

    for (const auto& c : report.clients) {
        bool flagged = false;
        if (rule == config::Rule::trimmed_mean)
            flagged = c.trimmed_fraction > cfg.trim_flag_threshold;
        else if (rule == config::Rule::krum)
            flagged = c.krum_score > cfg.krum_score_factor * median;

        auto it = records.find(c.id);
        if (it == records.end()) continue;
        if (flagged) {
            out.flagged.push_back(c.id);
            if (++it->second.strikes >= cfg.strike_threshold) out.disconnect.push_back(c.id);
        } else {
            it->second.strikes = 0;
        }
    }
    return out;
}

// Shared collusion channel. Every connected malicious client deposits its
// honestly trained update each round; once the last deposit lands the common
// stealth vector is computed over the cohort.
class AdversaryCohort {
public:
    explicit AdversaryCohort(double z) : z_(z) {}

    void join(const std::string& id) {
        std::lock_guard lock(m_);
        members_.insert(id);
    }
    void leave(const std::string& id) {
        std::lock_guard lock(m_);
        members_.erase(id);
    }
    std::size_t active_members() const {
        std::lock_guard lock(m_);
        return members_.size();
    }

    void deposit(int round, const std::string& id, nn::ParamVector honest_update) {
        std::unique_lock lock(m_);
        if (round != round_) {
            round_ = round;
            deposits_.clear();
            crafted_.reset();
        }
        deposits_[id] = std::move(honest_update);
        if (deposits_.size() >= members_.size()) {
            agg::UpdateSet cohort;
            for (auto& [cid, update] : deposits_) cohort.entries.push_back({cid, update});
            crafted_ = attacks::alie_attack(cohort, z_);
            cv_.notify_all();
        }
    }

    std::optional<nn::ParamVector> crafted(int round) const {
        std::lock_guard lock(m_);
        if (round_ == round && crafted_) return crafted_;
        return std::nullopt;
    }

    nn::ParamVector crafted_blocking(int round) {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return round_ == round && crafted_.has_value(); });
        return *crafted_;
    }

private:
    double z_;
    mutable std::mutex m_;
    std::condition_variable cv_;
    std::set<std::string> members_;
    int round_ = -1;
    std::map<std::string, nn::ParamVector> deposits_;
    std::optional<nn::ParamVector> crafted_;
};

struct ClientEnv {
    nn::ModelConfig model;
    attacks::AttackParams attack;
    bool ibi_enabled = true;
    std::uint64_t master_seed = 0;
};

// One simulated participant: authentication session, local training, and,
// for adversary-controlled clients, the attack strategy machine.
class ClientRuntime {
public:
    ClientRuntime(std::string id, int shard_index, nn::Samples shard, bool malicious,
                  std::shared_ptr<AdversaryCohort> cohort, ClientEnv env)
        : id_(std::move(id)),
          shard_index_(shard_index),
          shard_(std::move(shard)),
          malicious_(malicious),
          cohort_(std::move(cohort)),
          env_(std::move(env)) {
        if (malicious_) rmc_.emplace();
    }

    const std::string& id() const { return id_; }
    int shard_index() const { return shard_index_; }
    bool malicious() const { return malicious_; }
    bool connected() const { return connected_; }
    bool gave_up() const { return gave_up_; }
    bool wants_reconnect() const { return !connected_ && !gave_up_ && reconnect_pending_; }
    bool update_pending() const { return update_deferred_; }
    attacks::RmcState rmc_state() const { return rmc_.value_or(attacks::RmcState{}); }

    // Opens a session: fresh commitment nonce per attempt when IBI is on.
    wire::Message hello() {
        wire::Message m;
        m.type = wire::MsgType::auth_hello;
        m.id = id_;
        if (env_.ibi_enabled) {
            Rng rng = derive_rng(env_.master_seed, "client-nonce/" + id_,
                                 static_cast<std::uint64_t>(auth_attempts_++));
            session_.emplace(ibi::ProverSession<AuthGroup>::start(rng));
            m.body["cmt"] = to_hex(AuthGroup::encode(session_->commitment()));
        }
        return m;
    }

    // Handles one server message; returns the replies to send. ALIE-phase
    // update submission may stay pending until the whole cohort has trained:
    // with `blocking_cohort` the call waits, otherwise poll pending_update().
    std::vector<wire::Message> handle(const wire::Message& msg, bool blocking_cohort) {
        switch (msg.type) {
            case wire::MsgType::auth_register: {
                auto bytes = from_hex(msg.body.value("usk", ""));
                if (bytes) {
                    auto s = AuthGroup::sc_decode(*bytes);
                    if (s) usk_ = ibi::UserSecretKey<AuthGroup>{id_, *s};
                }
                return {};
            }
            case wire::MsgType::auth_challenge: {
                if (!session_ || !usk_) return {};
                auto bytes = from_hex(msg.body.value("cha", ""));
                if (!bytes) return {};
                auto cha = AuthGroup::sc_decode(*bytes);
                if (!cha) return {};
                wire::Message resp;
                resp.type = wire::MsgType::auth_response;
                resp.id = id_;
                resp.body["rsp"] = to_hex(AuthGroup::sc_encode(session_->respond(*usk_, *cha)));
                return {resp};
            }
            case wire::MsgType::auth_result: {
                const bool accepted = msg.body.value("accepted", false);
                connected_ = accepted;
                reconnect_pending_ = false;
                if (accepted) {
                    if (malicious_ && cohort_) cohort_->join(id_);
                } else {
                    if (malicious_ && rmc_ && rmc_->phase != attacks::RmcPhase::banned)
                        rmc_ = attacks::rmc_transition(*rmc_, attacks::RmcEvent::reconnect_denied);
                    if (malicious_ && cohort_) cohort_->leave(id_);
                    gave_up_ = true;
                }
                return {};
            }
            case wire::MsgType::model_broadcast:
                return on_broadcast(msg, blocking_cohort);
            case wire::MsgType::force_disconnect: {
                connected_ = false;
                if (malicious_ && cohort_) cohort_->leave(id_);
                if (malicious_ && rmc_) {
                    rmc_ = attacks::rmc_transition(*rmc_, attacks::RmcEvent::force_disconnected);
                    reconnect_pending_ = true; // comes back immediately, stealthier
                } else {
                    reconnect_pending_ = false; // honest clients accept the verdict
                }
                return {};
            }
            case wire::MsgType::bye:
                connected_ = false;
                return {};
            default:
                return {};
        }
    }

    // Deferred ALIE submission (single-threaded scheduling path).
    std::optional<wire::Message> pending_update(bool blocking) {
        if (!update_deferred_) return std::nullopt;
        std::optional<nn::ParamVector> crafted;
        if (blocking)
            crafted = cohort_->crafted_blocking(cur_round_);
        else
            crafted = cohort_->crafted(cur_round_);
        if (!crafted) return std::nullopt;
        update_deferred_ = false;
        return make_submit(*crafted);
    }

private:
    std::vector<wire::Message> on_broadcast(const wire::Message& msg, bool blocking_cohort) {
        if (!msg.round) return {};
        cur_round_ = *msg.round;
        auto global = wire::params_from_b64(msg.body.value("params", ""));
        if (!global) return {};

        // everyone trains honestly first; attacks perturb a real update
        const auto honest = nn::train_local(
            env_.model, *global, shard_,
            derive_rng_seed("train/" + id_, static_cast<std::uint64_t>(cur_round_)));

        if (!malicious_) return {make_submit(honest)};

        cohort_->deposit(cur_round_, id_, honest);
        if (rmc_->phase == attacks::RmcPhase::gaussian) {
            Rng noise = derive_rng(env_.master_seed, "gaussian/" + id_,
                                   static_cast<std::uint64_t>(cur_round_));
            return {make_submit(attacks::gaussian_attack(honest, env_.attack, noise))};
        }
        // ALIE: wait for the cohort statistics
        if (blocking_cohort) return {make_submit(cohort_->crafted_blocking(cur_round_))};
        update_deferred_ = true;
        return {};
    }

    std::uint64_t derive_rng_seed(const std::string& stream, std::uint64_t index) const {
        // train_local derives its own stream from the seed we hand it
        std::uint64_t state = env_.master_seed ^ fnv1a64(stream) ^ (index * 0x9e3779b97f4a7c15ULL);
        return splitmix64(state);
    }

    wire::Message make_submit(const nn::ParamVector& update) const {
        wire::Message m;
        m.type = wire::MsgType::update_submit;
        m.round = cur_round_;
        m.id = id_;
        m.body["params"] = wire::params_to_b64(update);
        return m;
    }

    std::string id_;
    int shard_index_;
    nn::Samples shard_;
    bool malicious_;
    std::shared_ptr<AdversaryCohort> cohort_;
    ClientEnv env_;

    std::optional<attacks::RmcState> rmc_;
    std::optional<ibi::ProverSession<AuthGroup>> session_;
    std::optional<ibi::UserSecretKey<AuthGroup>> usk_;
    int auth_attempts_ = 0;
    bool connected_ = false;
    bool reconnect_pending_ = false;
    bool gave_up_ = false;
    int cur_round_ = 0;
    bool update_deferred_ = false;
};

// Raised when a run cannot continue; carries whatever was logged so far.
class ExperimentAborted : public std::runtime_error {
public:
    ExperimentAborted(const std::string& what, metrics::MetricsLog partial)
        : std::runtime_error(what), partial_log(std::move(partial)) {}
    metrics::MetricsLog partial_log;
};

// Verifier, key-generation centre, round coordinator, detector and denylist
// in one: the server side of the simulation, transport-agnostic.
class Aggregator {
public:
    struct AuthSession {
        std::string claimed_id;
        std::optional<AuthGroup::Element> cmt;
        std::optional<AuthGroup::Scalar> cha;
        bool challenged = false;
    };

    Aggregator(config::ExperimentConfig cfg, data::Dataset dataset, Logger logger = nullptr)
        : cfg_(std::move(cfg)), ds_(std::move(dataset)), log_fn_(std::move(logger)) {
        cfg_.model.input_dim = static_cast<int>(ds_.n_features);
        cfg_.validate();
        part_ = data::partition(ds_, cfg_.n_clients, cfg_.test_fraction, cfg_.seed);
        test_ = data::gather(ds_, part_.test_indices);
        global_ = nn::init_model(cfg_.model, cfg_.seed);
        challenge_rng_.emplace(derive_rng(cfg_.seed, "verifier-challenge"));
        if (cfg_.ibi_enabled) {
            Rng setup_rng = derive_rng(cfg_.seed, "ibi-setup");
            keys_ = ibi::setup<AuthGroup>(setup_rng);
            say("[aggregator] master keys generated over " + std::string(AuthGroup::name()) +
                " (y1=" + to_hex(AuthGroup::encode(keys_->mpk.y1)) +
                ", y2=" + to_hex(AuthGroup::encode(keys_->mpk.y2)) + ")");
        }
        for (int i = 0; i < cfg_.n_clients; ++i) {
            ClientRecord rec;
            rec.id = client_name(i);
            rec.shard_index = i;
            rec.malicious = i >= cfg_.n_clients - cfg_.n_malicious;
            records_[rec.id] = rec;
        }
        log_.config_echo = config::to_json(cfg_);
        for (auto& [id, rec] : records_)
            if (rec.malicious) log_.malicious_ids.push_back(id);
        log_.aggregated_ids.push_back({}); // round 0 has no aggregation
    }

    static std::string client_name(int index) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "client-%02d", index);
        return buf;
    }

    const config::ExperimentConfig& cfg() const { return cfg_; }
    const data::Dataset& dataset() const { return ds_; }
    const data::Partition& partition() const { return part_; }
    const std::map<std::string, ClientRecord>& records() const { return records_; }
    const Denylist& denylist() const { return denylist_; }
    const nn::ParamVector& global_params() const { return global_; }
    const metrics::MetricsLog& log() const { return log_; }

    // Round index the next auth events and counters belong to.
    void set_event_round(int round) { event_round_ = round; }

    int active_count() const {
        int n = 0;
        for (auto& [id, rec] : records_) n += rec.status == ClientStatus::active;
        return n;
    }

    std::vector<wire::Message> on_message(AuthSession& session, const wire::Message& msg) {
        switch (msg.type) {
            case wire::MsgType::auth_hello: return on_hello(session, msg);
            case wire::MsgType::auth_response: return on_response(session, msg);
            case wire::MsgType::bye: {
                if (!session.claimed_id.empty()) mark_voluntary_disconnect(session.claimed_id);
                return {};
            }
            default:
                return {deny(session, "malformed")};
        }
    }

    wire::Message broadcast(int round) {
        bcast_active_ = active_count();
        wire::Message m;
        m.type = wire::MsgType::model_broadcast;
        m.round = round;
        m.body["params"] = wire::params_to_b64(global_);
        return m;
    }

    // Validated update intake; mismatched rounds or broken payloads count as
    // a mid-round transport failure for that client.
    bool accept_update(int round, const wire::Message& msg) {
        if (msg.type != wire::MsgType::update_submit || !msg.id || !msg.round ||
            *msg.round != round)
            return false;
        auto it = records_.find(*msg.id);
        if (it == records_.end() || it->second.status != ClientStatus::active) return false;
        auto params = wire::params_from_b64(msg.body.value("params", ""));
        if (!params || params->size() != nn::param_count(cfg_.model)) return false;
        updates_[*msg.id] = std::move(*params);
        return true;
    }

    void mark_voluntary_disconnect(const std::string& id) {
        auto it = records_.find(id);
        if (it != records_.end() && it->second.status == ClientStatus::active) {
            it->second.status = ClientStatus::disconnected;
            say("[aggregator] " + id + " left (voluntary/transport)");
        }
    }

    struct RoundCompletion {
        std::vector<std::pair<std::string, wire::Message>> disconnects;
    };

    // Aggregate, detect, disconnect, evaluate, log.
    RoundCompletion complete_round(int round) {
        agg::UpdateSet updates;
        for (auto& [id, params] : updates_) updates.entries.push_back({id, std::move(params)});
        updates_.clear();

        metrics::RoundMetrics row;
        row.round = round;
        row.active = bcast_active_;
        row.reconnect_attempts = pending_reconnects_;
        row.auth_denials = pending_denials_;
        pending_reconnects_ = pending_denials_ = 0;

        std::vector<std::string> included;
        for (const auto& e : updates.entries) included.push_back(e.client_id);
        log_.aggregated_ids.push_back(included);

        if (updates.entries.empty())
            throw ExperimentAborted("round " + std::to_string(round) +
                                        ": no client updates to aggregate",
                                    snapshot_log());

        agg::FlagReport report;
        switch (cfg_.rule) {
            case config::Rule::mean: {
                global_ = agg::aggregate_mean(updates);
                for (const auto& e : updates.entries) {
                    agg::FlagReport::PerClient c;
                    c.id = e.client_id;
                    report.clients.push_back(c);
                }
                break;
            }
            case config::Rule::trimmed_mean: {
                auto [vec, rep] = agg::trimmed_mean(updates, {cfg_.trim_beta});
                global_ = std::move(vec);
                report = std::move(rep);
                break;
            }
            case config::Rule::krum: {
                agg::KrumConfig kc{cfg_.effective_krum_f()};
                if (static_cast<long>(updates.size()) - kc.assumed_byzantine - 2 < 1)
                    throw ExperimentAborted(
                        "round " + std::to_string(round) +
                            ": too few active clients for krum (n=" +
                            std::to_string(updates.size()) +
                            ", f=" + std::to_string(kc.assumed_byzantine) + ")",
                        snapshot_log());
                auto [sel, vec, rep] = agg::krum_select(updates, kc);
                row.selected_client = sel;
                global_ = std::move(vec);
                report = std::move(rep);
                break;
            }
        }

        auto policy = apply_disconnection_policy(records_, report, cfg_.rule, cfg_);
        row.flagged = policy.flagged;
        RoundCompletion completion;
        for (const auto& id : policy.disconnect) {
            auto& rec = records_[id];
            rec.status = cfg_.ibi_enabled ? ClientStatus::banned : ClientStatus::disconnected;
            rec.strikes = 0;
            if (cfg_.ibi_enabled) {
                denylist_.add(id);
                log_.bans.push_back({round, id});
            }
            row.disconnected.push_back(id);
            wire::Message m;
            m.type = wire::MsgType::force_disconnect;
            m.body["reason"] = "flagged_by_" + config::to_string(cfg_.rule);
            completion.disconnects.emplace_back(id, m);
            say("[aggregator] round " + std::to_string(round) + ": force-disconnect " + id +
                (cfg_.ibi_enabled ? " (denylisted)" : ""));
        }

        row.accuracy = nn::evaluate(cfg_.model, global_, test_);
        if (!row.flagged.empty()) {
            std::string ids;
            for (auto& f : row.flagged) ids += (ids.empty() ? "" : ",") + f;
            say("[aggregator] round " + std::to_string(round) + ": flagged [" + ids + "]");
        }
        say("[aggregator] round " + std::to_string(round) +
            ": accuracy=" + std::to_string(row.accuracy) +
            " active=" + std::to_string(row.active) +
            (row.selected_client.empty() ? "" : " selected=" + row.selected_client));
        log_.rounds.push_back(std::move(row));
        return completion;
    }

    // Round 0: evaluation of the freshly initialised model, admission stats.
    void record_round_zero() {
        metrics::RoundMetrics row;
        row.round = 0;
        row.active = active_count();
        row.reconnect_attempts = pending_reconnects_;
        row.auth_denials = pending_denials_;
        pending_reconnects_ = pending_denials_ = 0;
        row.accuracy = nn::evaluate(cfg_.model, global_, test_);
        say("[aggregator] round 0: initial accuracy=" + std::to_string(row.accuracy) +
            " active=" + std::to_string(row.active));
        log_.rounds.push_back(std::move(row));
    }

    metrics::MetricsLog snapshot_log() const { return log_; }

private:
    std::vector<wire::Message> on_hello(AuthSession& session, const wire::Message& msg) {
        if (!msg.id || msg.id->empty()) return {deny(session, "malformed")};
        session.claimed_id = *msg.id;

        auto it = records_.find(session.claimed_id);
        const bool reconnect =
            it != records_.end() && it->second.status != ClientStatus::pending_auth &&
            it->second.status != ClientStatus::active;
        if (reconnect) ++pending_reconnects_;

        if (!cfg_.ibi_enabled) return {admit(session, reconnect)};

        // denylist gate: banned identities get no challenge at all
        if (denylist_.contains(session.claimed_id)) return {deny(session, "banned", reconnect)};
        if (it == records_.end()) return {deny(session, "unknown_identity", reconnect)};

        auto cmt_bytes = from_hex(msg.body.value("cmt", ""));
        if (!cmt_bytes) return {deny(session, "malformed", reconnect)};
        auto cmt = AuthGroup::decode(*cmt_bytes);
        if (!cmt) return {deny(session, "malformed", reconnect)};
        session.cmt = *cmt;

        std::vector<wire::Message> out;
        if (!usk_issued_.count(session.claimed_id)) {
            // first contact: extract and deliver the user key in-band
            auto usk = ibi::extract(*keys_, session.claimed_id);
            usk_issued_.insert(session.claimed_id);
            wire::Message reg;
            reg.type = wire::MsgType::auth_register;
            reg.id = session.claimed_id;
            reg.body["usk"] = to_hex(AuthGroup::sc_encode(usk.s));
            out.push_back(std::move(reg));
            say("[aggregator] REGISTER " + session.claimed_id + " (usk issued)");
        }
        session.cha = ibi::verifier_challenge<AuthGroup>(*challenge_rng_);
        session.challenged = true;
        wire::Message cha;
        cha.type = wire::MsgType::auth_challenge;
        cha.id = session.claimed_id;
        cha.body["cha"] = to_hex(AuthGroup::sc_encode(*session.cha));
        out.push_back(std::move(cha));
        return out;
    }

    std::vector<wire::Message> on_response(AuthSession& session, const wire::Message& msg) {
        if (!cfg_.ibi_enabled || !session.challenged || !session.cmt || !session.cha)
            return {deny(session, "malformed")};
        auto rsp_bytes = from_hex(msg.body.value("rsp", ""));
        if (!rsp_bytes) return {deny(session, "malformed")};
        auto rsp = AuthGroup::sc_decode(*rsp_bytes);
        if (!rsp) return {deny(session, "malformed")};

        const auto verdict =
            ibi::verify(keys_->mpk, session.claimed_id, *session.cmt, *session.cha, *rsp);
        if (verdict != ibi::Verdict::accept) return {deny(session, "bad_proof")};
        return {admit(session, records_[session.claimed_id].status == ClientStatus::disconnected)};
    }

    wire::Message admit(AuthSession& session, bool reconnect) {
        auto& rec = records_[session.claimed_id];
        rec.status = ClientStatus::active;
        rec.strikes = 0;
        log_.auth_events.push_back(
            {event_round_, session.claimed_id, reconnect, true, "", ""});
        say("[aggregator] AUTH " + session.claimed_id + ": accepted" +
            (reconnect ? " (reconnect)" : ""));
        wire::Message m;
        m.type = wire::MsgType::auth_result;
        m.id = session.claimed_id;
        m.body["accepted"] = true;
        return m;
    }

    wire::Message deny(AuthSession& session, const std::string& reason, bool reconnect = false) {
        ++pending_denials_;
        log_.auth_events.push_back(
            {event_round_, session.claimed_id, reconnect, false, reason, ""});
        say("[aggregator] AUTH " + session.claimed_id + ": denied (" + reason + ")");
        wire::Message m;
        m.type = wire::MsgType::auth_result;
        if (!session.claimed_id.empty()) m.id = session.claimed_id;
        m.body["accepted"] = false;
        m.body["reason"] = reason;
        return m;
    }

    void say(const std::string& line) const {
        if (log_fn_) log_fn_(line);
    }

public:
    // The driver annotates auth events with the adversary phase it can see.
    void annotate_last_auth_phase(const std::string& phase) {
        if (!log_.auth_events.empty()) log_.auth_events.back().rmc_phase = phase;
    }

    // Transport-level auth timeout (tcp only).
    void note_timeout_denial(AuthSession& session) { (void)deny(session, "timeout"); }

    metrics::MetricsLog take_log() { return std::move(log_); }

private:
    config::ExperimentConfig cfg_;
    data::Dataset ds_;
    data::Partition part_;
    nn::Samples test_;
    nn::ParamVector global_;
    std::optional<ibi::MasterKeys<AuthGroup>> keys_;
    std::optional<Rng> challenge_rng_;
    std::set<std::string> usk_issued_;
    Denylist denylist_;
    std::map<std::string, ClientRecord> records_;
    std::map<std::string, nn::ParamVector> updates_;
    metrics::MetricsLog log_;
    Logger log_fn_;
    int event_round_ = 0;
    int bcast_active_ = 0;
    int pending_reconnects_ = 0;
    int pending_denials_ = 0;
};

} // namespace fedshield::orch

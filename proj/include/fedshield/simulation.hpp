#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <thread>
#include <vector>

#include "fedshield/orchestration.hpp"
#include "fedshield/transport.hpp"

namespace fedshield::orch {

namespace detail {

inline std::vector<std::unique_ptr<ClientRuntime>> build_clients(
    const Aggregator& aggregator, const std::shared_ptr<AdversaryCohort>& cohort) {
    const auto& cfg = aggregator.cfg();
    ClientEnv env;
    env.model = cfg.model;
    env.attack = cfg.attack;
    env.ibi_enabled = cfg.ibi_enabled;
    env.master_seed = cfg.seed;

    std::vector<std::unique_ptr<ClientRuntime>> clients;
    for (int i = 0; i < cfg.n_clients; ++i) {
        const std::string id = Aggregator::client_name(i);
        const auto& rec = aggregator.records().at(id);
        auto shard = data::gather(aggregator.dataset(), aggregator.partition().shards[i]);
        clients.push_back(std::make_unique<ClientRuntime>(
            id, i, std::move(shard), rec.malicious, rec.malicious ? cohort : nullptr, env));
    }
    return clients;
}

} // namespace detail

// Single-threaded deterministic scheduler over in-process message passing.
// Clients are stepped in identity order, so two runs with the same config
// and seed replay bit-identically.
class Simulation {
public:
    Simulation(const config::ExperimentConfig& cfg, data::Dataset dataset, Logger logger = nullptr)
        : aggregator_(cfg, std::move(dataset), logger),
          cohort_(std::make_shared<AdversaryCohort>(cfg.attack.alie_z)) {
        clients_ = detail::build_clients(aggregator_, cohort_);
    }

    metrics::MetricsLog run() {
        aggregator_.set_event_round(0);
        for (auto& c : clients_) authenticate(*c);
        aggregator_.record_round_zero();

        for (int round = 1; round <= aggregator_.cfg().rounds; ++round) {
            aggregator_.set_event_round(round);
            for (auto& c : clients_)
                if (c->wants_reconnect()) authenticate(*c);

            if (aggregator_.active_count() == 0)
                throw ExperimentAborted("round " + std::to_string(round) +
                                            ": every client is disconnected",
                                        aggregator_.snapshot_log());

            const auto bcast = aggregator_.broadcast(round);
            std::vector<wire::Message> submissions;
            for (auto& c : clients_) {
                if (!is_active(*c)) continue;
                for (auto& m : c->handle(bcast, false)) submissions.push_back(std::move(m));
            }
            // second pass: stealth-phase clients waited for the whole cohort
            for (auto& c : clients_) {
                if (!is_active(*c) || !c->update_pending()) continue;
                auto m = c->pending_update(false);
                if (!m)
                    throw std::logic_error("simulation: cohort never completed in round " +
                                           std::to_string(round));
                submissions.push_back(std::move(*m));
            }
            for (const auto& m : submissions) aggregator_.accept_update(round, m);

            auto completion = aggregator_.complete_round(round);
            for (auto& [id, msg] : completion.disconnects) client_by_id(id).handle(msg, false);
        }
        return aggregator_.take_log();
    }

    Aggregator& aggregator() { return aggregator_; }
    const ClientRuntime& client(const std::string& id) const {
        return const_cast<Simulation*>(this)->client_by_id(id);
    }

private:
    bool is_active(const ClientRuntime& c) const {
        return aggregator_.records().at(c.id()).status == ClientStatus::active;
    }

    ClientRuntime& client_by_id(const std::string& id) {
        for (auto& c : clients_)
            if (c->id() == id) return *c;
        throw std::logic_error("simulation: unknown client " + id);
    }

    void authenticate(ClientRuntime& c) {
        const std::string phase_at_attempt =
            c.malicious() ? attacks::to_string(c.rmc_state().phase) : "";
        Aggregator::AuthSession session;
        std::deque<wire::Message> to_server;
        to_server.push_back(c.hello());
        while (!to_server.empty()) {
            const auto msg = to_server.front();
            to_server.pop_front();
            for (const auto& reply : aggregator_.on_message(session, msg))
                for (auto& counter : c.handle(reply, false)) to_server.push_back(std::move(counter));
        }
        if (c.malicious()) aggregator_.annotate_last_auth_phase(phase_at_attempt);
    }

    Aggregator aggregator_;
    std::shared_ptr<AdversaryCohort> cohort_;
    std::vector<std::unique_ptr<ClientRuntime>> clients_;
};

// Loopback-socket flavour: one OS thread per client speaking the framed wire
// protocol against the coordinator loop. Used for realistic runs; the
// deterministic scheduler above is the reference for tests.
class TcpSimulation {
public:
    TcpSimulation(const config::ExperimentConfig& cfg, data::Dataset dataset,
                  Logger logger = nullptr)
        : aggregator_(cfg, std::move(dataset), logger),
          cohort_(std::make_shared<AdversaryCohort>(cfg.attack.alie_z)) {
        clients_ = detail::build_clients(aggregator_, cohort_);
    }

    metrics::MetricsLog run() {
        using namespace std::chrono_literals;
        transport::TcpListener listener(aggregator_.cfg().tcp_port);

        std::vector<std::thread> threads;
        threads.reserve(clients_.size());
        for (auto& c : clients_)
            threads.emplace_back([this, &c, port = listener.port()] { client_loop(*c, port); });

        struct Joiner {
            std::vector<std::thread>& ts;
            ~Joiner() {
                for (auto& t : ts)
                    if (t.joinable()) t.join();
            }
        } joiner{threads};

        aggregator_.set_event_round(0);
        admission_window(listener, static_cast<std::size_t>(aggregator_.cfg().n_clients), 10s);
        aggregator_.record_round_zero();

        metrics::MetricsLog result;
        try {
            for (int round = 1; round <= aggregator_.cfg().rounds; ++round) {
                aggregator_.set_event_round(round);
                admission_window(listener, 0, 300ms); // immediate reconnects land here

                if (aggregator_.active_count() == 0)
                    throw ExperimentAborted("round " + std::to_string(round) +
                                                ": every client is disconnected",
                                            aggregator_.snapshot_log());

                const auto bcast = aggregator_.broadcast(round);
                std::vector<std::string> participants;
                for (auto& [id, link] : links_) {
                    if (aggregator_.records().at(id).status != ClientStatus::active) continue;
                    if (link->send(bcast))
                        participants.push_back(id);
                    else
                        aggregator_.mark_voluntary_disconnect(id);
                }
                for (const auto& id : participants) {
                    auto msg = links_[id]->recv(120s);
                    if (!msg || !aggregator_.accept_update(round, *msg))
                        aggregator_.mark_voluntary_disconnect(id);
                }

                auto completion = aggregator_.complete_round(round);
                for (auto& [id, msg] : completion.disconnects) {
                    auto it = links_.find(id);
                    if (it != links_.end()) {
                        it->second->send(msg);
                        links_.erase(it);
                    }
                }
            }
            result = aggregator_.take_log();
        } catch (...) {
            shutdown_links();
            throw;
        }
        shutdown_links();
        return result;
    }

private:
    void shutdown_links() {
        wire::Message bye;
        bye.type = wire::MsgType::bye;
        for (auto& [id, link] : links_) link->send(bye);
        links_.clear(); // closes sockets; client threads unblock and exit
    }

    // Accept and authenticate incoming connections until `expect` clients are
    // admitted (0 = drain whatever shows up) or the window goes quiet.
    void admission_window(transport::TcpListener& listener, std::size_t expect,
                          std::chrono::milliseconds window) {
        using namespace std::chrono_literals;
        const auto deadline = std::chrono::steady_clock::now() + window;
        std::size_t admitted = 0;
        while (std::chrono::steady_clock::now() < deadline) {
            auto fd = listener.accept(100ms);
            if (!fd) {
                if (expect == 0 || admitted >= expect) break;
                continue;
            }
            auto link = std::make_unique<transport::TcpLink>(*fd);
            if (serve_auth(*link)) {
                ++admitted;
            }
        }
    }

    // Runs one auth exchange over the link; stores the link on admission.
    bool serve_auth(transport::TcpLink& link) {
        using namespace std::chrono_literals;
        Aggregator::AuthSession session;
        while (true) {
            auto msg = link.recv(5s);
            if (!msg) {
                wire::Message m;
                m.type = wire::MsgType::auth_result;
                m.body["accepted"] = false;
                m.body["reason"] = "timeout";
                aggregator_.note_timeout_denial(session);
                link.send(m);
                return false;
            }
            auto replies = aggregator_.on_message(session, *msg);
            bool done = false, admitted = false;
            for (auto& r : replies) {
                link.send(r);
                if (r.type == wire::MsgType::auth_result) {
                    done = true;
                    admitted = r.body.value("accepted", false);
                }
            }
            if (done) {
                if (admitted) {
                    // hand the connection over to the round loop
                    auto stored = std::make_unique<transport::TcpLink>(link.release_fd());
                    links_[session.claimed_id] = std::move(stored);
                }
                return admitted;
            }
        }
    }

    void client_loop(ClientRuntime& c, std::uint16_t port) {
        using namespace std::chrono_literals;
        bool connect_now = true;
        while (connect_now && !c.gave_up()) {
            connect_now = false;
            int fd = -1;
            try {
                fd = transport::tcp_connect(port);
            } catch (const std::exception&) {
                return;
            }
            transport::TcpLink link(fd);
            if (!link.send(c.hello())) return;
            while (true) {
                auto msg = link.recv(120s);
                if (!msg) return; // server closed or timed out: give up quietly
                for (auto& reply : c.handle(*msg, /*blocking_cohort=*/true))
                    if (!link.send(reply)) return;
                if (msg->type == wire::MsgType::bye) return;
                if (msg->type == wire::MsgType::auth_result && !c.connected()) return;
                if (msg->type == wire::MsgType::force_disconnect) {
                    connect_now = c.wants_reconnect();
                    break;
                }
            }
        }
    }

    Aggregator aggregator_;
    std::shared_ptr<AdversaryCohort> cohort_;
    std::vector<std::unique_ptr<ClientRuntime>> clients_;
    std::map<std::string, std::unique_ptr<transport::TcpLink>> links_;
};

// Loads and prepares the dataset, then drives the configured transport.
inline metrics::MetricsLog run_experiment(const config::ExperimentConfig& cfg,
                                          Logger logger = nullptr) {
    cfg.validate();
    auto dataset = data::normalize(data::load_csv(cfg.dataset_path));
    if (cfg.transport == config::Transport::tcp)
        return TcpSimulation(cfg, std::move(dataset), logger).run();
    return Simulation(cfg, std::move(dataset), logger).run();
}

} // namespace fedshield::orch

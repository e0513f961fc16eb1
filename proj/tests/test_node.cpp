#include <doctest.h>

#include <queue>
#include "coinami/crypto/encoding.hpp"

#include "coinami/miner/node.hpp"
#include "coinami/miner/wallet.hpp"
#include "testutil.hpp"

using namespace coinami;
using namespace coinami::miner;
using coinami::crypto::SplitMix64;
using ledger::Block;
using ledger::Transaction;

namespace {

struct NodeFixture {
    testutil::AuthorityFixture auth = testutil::make_authority_fixture(120);
    std::vector<crypto::schnorr::KeyPair> keys;
    int job_seq = 0;

    NodeFixture() {
        for (uint64_t i = 0; i < 4; ++i) keys.push_back(crypto::schnorr::keygen_seeded(1200 + i));
    }

    std::unique_ptr<Node> make_node() {
        verifier::CertificateStore store;
        store.add(auth.cert);
        return std::make_unique<Node>(auth.root.pub_hex(), std::move(store));
    }

    verifier::SignedToken fresh_token(const std::string& miner_pubkey) {
        return testutil::make_final_token(auth, "J" + std::to_string(++job_seq), miner_pubkey);
    }
};

/// Discrete-event message bus over a full mesh of nodes. Delivery
/// delays are drawn from the seeded generator, so every run of a seed
/// is identical.
struct SimNet {
    std::vector<Node*> nodes;
    SplitMix64 rng{991};
    int64_t now = 0;
    uint64_t seq = 0;
    size_t delivered = 0;

    struct Event {
        int64_t at;
        uint64_t seq;
        int dst;
        int src;
        kv::Doc msg;
        bool operator>(const Event& o) const { return std::tie(at, seq) > std::tie(o.at, o.seq); }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;

    void post(int src, int dst, kv::Doc msg) {
        queue.push({now + 1 + static_cast<int64_t>(rng.below(5)), seq++, dst, src,
                    std::move(msg)});
    }

    void broadcast(int src, const kv::Doc& msg, int except = -1) {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (static_cast<int>(i) != src && static_cast<int>(i) != except) post(src, i, msg);
    }

    void run() {
        while (!queue.empty()) {
            Event ev = queue.top();
            queue.pop();
            now = ev.at;
            ++delivered;
            REQUIRE(delivered < 100000);  // relay dedup must bound traffic
            Node::Outcome out = nodes[ev.dst]->handle_gossip(ev.msg);
            for (const auto& relay : out.relay) broadcast(ev.dst, relay, ev.src);
            if (out.reply) post(ev.dst, ev.src, *out.reply);
        }
    }
};

}  // namespace

TEST_CASE("node: valid block applies and relays, duplicates do not") {
    NodeFixture fx;
    auto n0 = fx.make_node();
    auto n1 = fx.make_node();

    auto announce = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 500);
    REQUIRE(announce);
    CHECK(n0->tip_height() == 1);

    auto out = n1->handle_gossip(*announce);
    CHECK(n1->tip_height() == 1);
    CHECK(n1->tip_hash() == n0->tip_hash());
    CHECK(out.relay.size() == 1);  // relayed exactly once

    auto again = n1->handle_gossip(*announce);
    CHECK(again.relay.empty());  // dedup
}

TEST_CASE("node: forged token dropped silently, never relayed") {
    NodeFixture fx;
    auto n0 = fx.make_node();
    testutil::AuthorityFixture rogue = testutil::make_authority_fixture(121);

    Block bad;
    bad.prev_hash = Block::genesis_hash();
    bad.timestamp = 500;
    bad.token = testutil::make_final_token(rogue, "JR", fx.keys[0].pub_hex());
    bad.txs.push_back(ledger::make_coinbase(fx.keys[0].pub_hex(), 1));

    kv::Doc msg;
    msg.add("type", "BLOCK_ANNOUNCE");
    msg.add("v", "1");
    msg.add("block_hash", bad.hash());
    msg.add("block", crypto::base64_encode(bad.render()));
    auto out = n0->handle_gossip(msg);
    CHECK(out.relay.empty());
    CHECK_FALSE(out.reply);
    CHECK(n0->tip_height() == 0);

    // hash mismatch is equally fatal
    kv::Doc lying = Node::make_tx_announce(Transaction{});
    (void)lying;
    auto good_block_announce = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 501);
    REQUIRE(good_block_announce);
}

TEST_CASE("node: orphan triggers a chain request and catches up") {
    NodeFixture fx;
    auto n0 = fx.make_node();
    auto n1 = fx.make_node();

    auto a1 = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 500);
    auto a2 = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 501);
    REQUIRE(a2);

    // n1 hears only the second block: parent unknown
    auto out = n1->handle_gossip(*a2);
    CHECK(n1->tip_height() == 0);
    REQUIRE(out.reply);
    CHECK(out.reply->get("type") == "CHAIN_REQUEST");

    // n0 answers the request; n1 applies the whole ancestry
    auto resp = n0->handle_gossip(*out.reply);
    REQUIRE(resp.reply);
    CHECK(resp.reply->get("type") == "CHAIN_RESPONSE");
    auto final = n1->handle_gossip(*resp.reply);
    CHECK(n1->tip_height() == 2);
    CHECK(n1->tip_hash() == n0->tip_hash());
    // both the ancestor and the unblocked orphan relay onward
    CHECK(final.relay.size() == 2);
}

TEST_CASE("node: tx gossip validates, dedups, and confirms") {
    NodeFixture fx;
    auto n0 = fx.make_node();
    auto n1 = fx.make_node();

    auto announce = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 500);
    n1->handle_gossip(*announce);

    Transaction tx = build_send_tx(n0->utxo_snapshot(), fx.keys[0], fx.keys[1].pub_hex(), 20);
    auto broadcastable = n0->submit_local_tx(tx);
    REQUIRE(broadcastable);
    auto out = n1->handle_gossip(*broadcastable);
    CHECK(out.relay.size() == 1);
    CHECK(n1->pending_transactions().size() == 1);
    CHECK(n1->handle_gossip(*broadcastable).relay.empty());  // dedup

    // invalid spend never enters the pool
    Transaction forged = tx;
    forged.outputs[0].amount = 500;
    auto bad = n1->handle_gossip(Node::make_tx_announce(forged));
    CHECK(bad.relay.empty());
    CHECK(n1->pending_transactions().size() == 1);

    // balance reflects the transfer only after a block includes it
    CHECK(n1->balance(fx.keys[1].pub_hex()) == 0);
    auto announce2 = n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 501);
    n1->handle_gossip(*announce2);
    CHECK(n0->balance(fx.keys[1].pub_hex()) == 20);
    CHECK(n1->balance(fx.keys[1].pub_hex()) == 20);
    CHECK(n1->pending_transactions().empty());  // confirmed, pruned
}

TEST_CASE("node: chain persistence round trip") {
    NodeFixture fx;
    auto n0 = fx.make_node();
    n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 500);
    n0->mine_block(fx.fresh_token(fx.keys[0].pub_hex()), 501);
    std::string stored = n0->serialize_chain();

    auto n1 = fx.make_node();
    CHECK(n1->load_chain(stored) == 2);
    CHECK(n1->tip_hash() == n0->tip_hash());
    CHECK(n1->utxo_snapshot() == n0->utxo_snapshot());
}

TEST_CASE("node: simulated network of five miners converges") {
    NodeFixture fx;
    std::vector<std::unique_ptr<Node>> owned;
    SimNet net;
    for (int i = 0; i < 5; ++i) owned.push_back(fx.make_node());
    for (auto& n : owned) net.nodes.push_back(n.get());

    SplitMix64 rng(77);
    for (int round = 0; round < 12; ++round) {
        int miner = static_cast<int>(rng.below(net.nodes.size()));
        // an occasional wallet transfer rides along
        if (round > 2 && rng.below(2)) {
            auto& from = fx.keys[rng.below(2)];
            uint64_t balance = net.nodes[miner]->balance(from.pub_hex());
            if (balance > 0) {
                Transaction tx = build_send_tx(net.nodes[miner]->utxo_snapshot(), from,
                                               fx.keys[2].pub_hex(), 1 + rng.below(balance));
                if (auto announce = net.nodes[miner]->submit_local_tx(tx))
                    net.broadcast(miner, *announce);
            }
        }
        auto announce = net.nodes[miner]->mine_block(
            fx.fresh_token(fx.keys[rng.below(2)].pub_hex()), 500 + round);
        REQUIRE(announce);
        net.broadcast(miner, *announce);
        if (rng.below(2)) net.run();  // sometimes let the network settle mid-stream
    }
    net.run();

    for (size_t i = 1; i < net.nodes.size(); ++i) {
        CHECK(net.nodes[i]->tip_hash() == net.nodes[0]->tip_hash());
        CHECK(net.nodes[i]->utxo_snapshot() == net.nodes[0]->utxo_snapshot());
    }
    CHECK(net.nodes[0]->tip_height() >= 6);  // forks orphan some blocks, most land
}

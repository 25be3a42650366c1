/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include <wjoin/core/errors.hpp>
#include <wjoin/transport/clock.hpp>
#include <wjoin/transport/event_log.hpp>
#include <wjoin/transport/event_queue.hpp>
#include <wjoin/transport/protocol.hpp>
#include <wjoin/transport/sim_transport.hpp>
#include <wjoin/transport/slot_guard.hpp>
#include <wjoin/transport/socket_transport.hpp>

#include <gtest/gtest.h>
#include <sstream>
#include <thread>

using namespace wjoin;
using namespace std::chrono_literals;

namespace {

IntervalGrid grid() { return IntervalGrid::make(SimTime{0}, seconds(100), seconds(100)); }

class Recorder final : public MessageHandler {
  public:
    std::optional<EpochMessage> on_message(const EpochMessage& msg) override {
        seen.push_back(msg);
        if (expects_reply(msg.kind)) {
            return make_message(MessageKind::Ack, msg.receiver, msg.sender, AckPayload{msg.kind, 0}.encode());
        }
        return std::nullopt;
    }
    std::vector<EpochMessage> seen;
};

EpochMessage batch_to(NodeId receiver, std::size_t tuples = 0) {
    TupleBatchPayload p;
    p.tuples.assign(tuples, Tuple::make(StreamId::S1, Timestamp{0}, 1, 0));
    return make_message(MessageKind::TupleBatch, kMasterNode, receiver, p.encode());
}

}// namespace

TEST(LinkModel, ZeroBytesCostsBaseLatency) {
    LinkModel link;
    EXPECT_EQ(link.latency(0), SimTime{100'000});
}

TEST(LinkModel, SixtyFourKilobytes) {
    LinkModel link;
    // 65536 B / 125e6 B/s = 524.288 us on top of the 100 us base.
    EXPECT_EQ(link.latency(64 * 1024), SimTime{100'000 + 524'288});
}

TEST(Frame, RoundTrip) {
    EpochMessage m = make_message(MessageKind::LoadReport, 3, 0, LoadReportPayload{0.25, 4, 1}.encode());
    const auto bytes = encode_frame(m);
    EXPECT_EQ(bytes.size(), kFrameHeaderBytes + m.payload.size());
    const auto back = decode_frame(bytes);
    EXPECT_EQ(back.kind, m.kind);
    EXPECT_EQ(back.sender, 3);
    EXPECT_EQ(back.receiver, 0);
    EXPECT_EQ(back.payload, m.payload);
    const auto report = LoadReportPayload::decode(back.payload);
    EXPECT_DOUBLE_EQ(report.occupancy, 0.25);
    EXPECT_EQ(report.samples, 4u);
    EXPECT_EQ(report.overloads, 1u);
}

TEST(Frame, RejectsBadInput) {
    auto bytes = encode_frame(make_message(MessageKind::Ack, 1, 0, AckPayload{}.encode()));
    auto short_frame = bytes;
    short_frame.pop_back();
    EXPECT_THROW(decode_frame(short_frame), ProtocolFault);
    auto bad_kind = bytes;
    bad_kind[0] = 0;
    EXPECT_THROW(decode_frame(bad_kind), ProtocolFault);
    bad_kind[0] = 13;
    EXPECT_THROW(decode_frame(bad_kind), ProtocolFault);
}

TEST(Protocol, ReplyKinds) {
    for (auto k : {MessageKind::LoadRequest, MessageKind::MoveOut, MessageKind::MoveIn, MessageKind::StateTransfer,
                   MessageKind::Shutdown}) {
        EXPECT_TRUE(expects_reply(k)) << kind_name(k);
    }
    for (auto k : {MessageKind::TupleBatch, MessageKind::LoadReport, MessageKind::Ack, MessageKind::ClockSync,
                   MessageKind::Activate, MessageKind::Deactivate, MessageKind::ResultBatch}) {
        EXPECT_FALSE(expects_reply(k)) << kind_name(k);
    }
}

TEST(Protocol, PayloadRoundTrips) {
    TupleBatchPayload b;
    b.epoch = 7;
    b.slot = 2;
    b.cut = Timestamp{123456};
    b.tuples = {Tuple::make(StreamId::S2, Timestamp{5}, 9, 11)};
    const auto b2 = TupleBatchPayload::decode(b.encode());
    EXPECT_EQ(b2.epoch, 7u);
    EXPECT_EQ(b2.slot, 2u);
    EXPECT_EQ(b2.cut, Timestamp{123456});
    EXPECT_EQ(b2.tuples, b.tuples);

    const MoveInstruction mv{2, 5, 17};
    EXPECT_EQ(MoveInstruction::decode(mv.encode()), mv);

    EXPECT_EQ(LoadRequestPayload::decode(LoadRequestPayload{42}.encode()).epoch, 42u);
    EXPECT_EQ(ClockSyncPayload::decode(ClockSyncPayload{SimTime{987}}.encode()).master_time, SimTime{987});
    const auto ack = AckPayload::decode(AckPayload{MessageKind::MoveIn, 3}.encode());
    EXPECT_EQ(ack.acked, MessageKind::MoveIn);
    EXPECT_EQ(ack.group, 3u);

    ResultBatchPayload r;
    r.results.push_back({4, Timestamp{1}, Timestamp{2}, Timestamp{3}, 10, 20});
    EXPECT_EQ(ResultBatchPayload::decode(r.encode()).results, r.results);
    EXPECT_THROW(MoveInstruction::decode(std::vector<std::uint8_t>{1, 2}), ProtocolFault);
}

TEST(SlotGuard, TupleBatchOutsideSlotIsAViolation) {
    SlotGuard guard(9);
    EXPECT_THROW(guard.check(batch_to(1)), SlotViolation);
    guard.begin_reorganization(0);
    EXPECT_THROW(guard.check(batch_to(1)), SlotViolation);
    EXPECT_EQ(guard.violations(), 2u);
}

TEST(SlotGuard, SlotMembershipAndOrder) {
    SlotGuard guard(9);
    guard.begin_slot(0, 0, {3, 1});
    EXPECT_NO_THROW(guard.check(batch_to(1)));
    EXPECT_THROW(guard.check(batch_to(2)), SlotViolation);
    EXPECT_NO_THROW(guard.check(batch_to(3)));
    EXPECT_THROW(guard.check(batch_to(1)), SlotViolation);
    auto from_slave = batch_to(3);
    from_slave.sender = 2;
    guard.begin_slot(0, 1, {3});
    EXPECT_THROW(guard.check(from_slave), SlotViolation);
}

TEST(SlotGuard, ControlOnlyDuringReorganization) {
    SlotGuard guard(9);
    const auto move_in = make_message(MessageKind::MoveIn, kMasterNode, 2, MoveInstruction{1, 2, 0}.encode());
    guard.begin_slot(0, 0, {1, 2});
    EXPECT_THROW(guard.check(move_in), SlotViolation);
    guard.begin_reorganization(1);
    EXPECT_NO_THROW(guard.check(move_in));
    EXPECT_NO_THROW(guard.check(make_message(MessageKind::StateTransfer, 1, 2)));
    EXPECT_THROW(guard.check(make_message(MessageKind::StateTransfer, 0, 2)), SlotViolation);
    EXPECT_THROW(guard.check(make_message(MessageKind::MoveOut, 1, 2)), SlotViolation);
    EXPECT_THROW(guard.check(make_message(MessageKind::Shutdown, 0, 2)), SlotViolation);
    guard.begin_shutdown(2);
    EXPECT_NO_THROW(guard.check(make_message(MessageKind::Shutdown, 0, 2)));
}

TEST(SlotGuard, RepliesAndResultsAlwaysAllowed) {
    SlotGuard guard(9);
    EXPECT_NO_THROW(guard.check(make_message(MessageKind::Ack, 1, 0)));
    EXPECT_NO_THROW(guard.check(make_message(MessageKind::LoadReport, 1, 0)));
    EXPECT_NO_THROW(guard.check(make_message(MessageKind::ResultBatch, 1, 9)));
    EXPECT_THROW(guard.check(make_message(MessageKind::ResultBatch, 1, 2)), SlotViolation);
}

TEST(EventQueue, EmptyAdvanceIsANoOp) {
    EventQueue q;
    EXPECT_EQ(q.advance_clock(seconds(5)), 0u);
    EXPECT_EQ(q.now(), seconds(5));
    EXPECT_FALSE(q.next_time().has_value());
}

TEST(EventQueue, TiesFireInSenderOrderThenInsertion) {
    EventQueue q;
    std::vector<int> fired;
    q.schedule(SimTime{10}, 3, [&] { fired.push_back(3); });
    q.schedule(SimTime{10}, 1, [&] { fired.push_back(1); });
    q.schedule(SimTime{5}, 9, [&] { fired.push_back(9); });
    q.schedule(SimTime{10}, 1, [&] { fired.push_back(11); });
    EXPECT_EQ(q.advance_clock(SimTime{10}), 4u);
    EXPECT_EQ(fired, (std::vector<int>{9, 1, 11, 3}));
}

TEST(EventQueue, EventsScheduledWhileFiringRun) {
    EventQueue q;
    int n = 0;
    std::function<void()> again = [&] {
        if (++n < 5) {
            q.schedule(q.now() + SimTime{1}, 0, again);
        }
    };
    q.schedule(SimTime{0}, 0, again);
    q.advance_clock(SimTime{100});
    EXPECT_EQ(n, 5);
    EXPECT_THROW(q.schedule(SimTime{50}, 0, [] {}), std::logic_error);
}

TEST(EventLog, CsvOrderedByTimeSenderSequence) {
    EventLog log;
    log.record({SimTime{2'000'000'000}, MessageKind::Ack, 2, 0, 16, 1, std::nullopt, 0});
    log.record({SimTime{1'000'000'001}, MessageKind::TupleBatch, 0, 1, 64, 0, 0u, 0});
    log.record({SimTime{2'000'000'000}, MessageKind::Ack, 1, 0, 16, 1, std::nullopt, 0});
    std::ostringstream out;
    log.write_csv(out);
    EXPECT_EQ(out.str(),
              "virtual_time,kind,sender,receiver,bytes,epoch,slot\n"
              "1.000000001,TupleBatch,0,1,64,0,0\n"
              "2.000000000,Ack,1,0,16,1,\n"
              "2.000000000,Ack,2,0,16,1,\n");
}

TEST(TimeLedger, SplitsSpansAtIntervalBoundaries) {
    TimeLedger ledger(IntervalGrid::make(seconds(10), seconds(10), seconds(30)));
    ledger.add(seconds(5), seconds(15), TimeUse::busy);
    ledger.add(seconds(15), seconds(25), TimeUse::idle);
    EXPECT_EQ(ledger.total().busy, seconds(10));
    EXPECT_EQ(ledger.interval(0).busy, seconds(5));
    EXPECT_EQ(ledger.interval(0).idle, seconds(5));
    EXPECT_EQ(ledger.interval(1).idle, seconds(5));
}

TEST(SimNodeClock, AccountingCloses) {
    SimNodeClock c(grid());
    c.charge_busy(SimTime{300});
    c.wait_until(SimTime{1000});
    c.wait_until(SimTime{500});
    c.charge_comm(SimTime{50});
    EXPECT_EQ(c.now(), SimTime{1050});
    EXPECT_EQ(c.ledger().total().sum(), c.now());
    EXPECT_EQ(c.ledger().total().idle, SimTime{700});
}

TEST(SimTransport, OneWaySendChargesBothEnds) {
    SlotGuard guard(9);
    EventLog log;
    SimTransport t(LinkModel{}, guard, log);
    SimNodeClock master(grid()), slave(grid());
    Recorder m, s;
    t.attach(0, m, master);
    t.attach(1, s, slave);
    master.wait_until(SimTime{1'000'000});
    guard.begin_slot(0, 0, {1});
    t.send(batch_to(1, 10));
    ASSERT_EQ(s.seen.size(), 1u);
    const auto l = LinkModel{}.latency(s.seen[0].payload.size());
    EXPECT_EQ(s.seen[0].delivered_at, SimTime{1'000'000} + l);
    EXPECT_EQ(master.now(), SimTime{1'000'000} + l);
    EXPECT_EQ(slave.now(), SimTime{1'000'000} + l);
    EXPECT_EQ(slave.ledger().total().comm, l);
    ASSERT_EQ(log.size(), 1u);
    EXPECT_EQ(log.ordered()[0].slot, std::optional<std::uint32_t>{0});
}

TEST(SimTransport, BusyReceiverDoesNotDelaySender) {
    SlotGuard guard(9);
    EventLog log;
    SimTransport t(LinkModel{}, guard, log);
    SimNodeClock master(grid()), slave(grid());
    Recorder m, s;
    t.attach(0, m, master);
    t.attach(1, s, slave);
    slave.charge_busy(seconds(1));
    guard.begin_slot(0, 0, {1});
    t.send(batch_to(1));
    const auto l = LinkModel{}.latency(batch_to(1).payload.size());
    EXPECT_EQ(master.now(), l);
    EXPECT_EQ(slave.now(), seconds(1) + l);
}

TEST(SimTransport, RequestIsARendezvous) {
    SlotGuard guard(9);
    EventLog log;
    SimTransport t(LinkModel{}, guard, log);
    SimNodeClock master(grid()), slave(grid());
    Recorder m, s;
    t.attach(0, m, master);
    t.attach(1, s, slave);
    slave.charge_busy(SimTime{5'000'000});
    guard.begin_reorganization(0);
    const auto reply = t.request(make_message(MessageKind::LoadRequest, 0, 1, LoadRequestPayload{0}.encode()));
    EXPECT_EQ(reply.kind, MessageKind::Ack);
    const auto l1 = LinkModel{}.latency(LoadRequestPayload{0}.encode().size());
    const auto l2 = LinkModel{}.latency(reply.payload.size());
    EXPECT_EQ(master.now(), SimTime{5'000'000} + l1 + l2);
    EXPECT_EQ(slave.now(), master.now());
    EXPECT_EQ(master.ledger().total().sum(), master.now());
    EXPECT_EQ(log.size(), 2u);
}

TEST(SimTransport, OutOfSlotSendFaults) {
    SlotGuard guard(9);
    EventLog log;
    SimTransport t(LinkModel{}, guard, log);
    SimNodeClock master(grid()), slave(grid());
    Recorder m, s;
    t.attach(0, m, master);
    t.attach(1, s, slave);
    EXPECT_THROW(t.send(batch_to(1)), SlotViolation);
    EXPECT_TRUE(s.seen.empty());
    EXPECT_EQ(log.size(), 0u);
}

TEST(SimTransport, MissingReplyIsAProtocolFault) {
    class Silent final : public MessageHandler {
      public:
        std::optional<EpochMessage> on_message(const EpochMessage&) override { return std::nullopt; }
    };
    SlotGuard guard(9);
    EventLog log;
    SimTransport t(LinkModel{}, guard, log);
    SimNodeClock a(grid()), b(grid());
    Recorder m;
    Silent s;
    t.attach(0, m, a);
    t.attach(1, s, b);
    guard.begin_reorganization(0);
    EXPECT_THROW(t.request(make_message(MessageKind::LoadRequest, 0, 1, LoadRequestPayload{}.encode())),
                 ProtocolFault);
    EXPECT_THROW(t.send(make_message(MessageKind::Activate, 0, 7)), ProtocolFault);
}

TEST(SocketTransport, SendAndRequestOverLoopback) {
    SlotGuard guard(9);
    EventLog log;
    SocketDirectory dir;
    const auto origin = std::chrono::steady_clock::now();
    RealNodeClock master_clock(grid(), origin, 1.0), slave_clock(grid(), origin, 1.0);
    SocketTransport master(0, master_clock, dir, guard, log, 5000ms);
    SocketTransport slave(1, slave_clock, dir, guard, log, 5000ms);
    master.listen();
    slave.listen();
    Recorder handler;
    std::thread server([&] { slave.serve(handler); });

    guard.begin_slot(0, 0, {1});
    master.send(batch_to(1, 100));
    guard.begin_reorganization(1);
    const auto reply = master.request(make_message(MessageKind::LoadRequest, 0, 1, LoadRequestPayload{1}.encode()));
    EXPECT_EQ(reply.kind, MessageKind::Ack);
    guard.begin_shutdown(2);
    const auto bye = master.request(make_message(MessageKind::Shutdown, 0, 1));
    EXPECT_EQ(AckPayload::decode(bye.payload).acked, MessageKind::Shutdown);
    server.join();

    ASSERT_EQ(handler.seen.size(), 3u);
    EXPECT_EQ(TupleBatchPayload::decode(handler.seen[0].payload).tuples.size(), 100u);
    EXPECT_EQ(handler.seen[1].kind, MessageKind::LoadRequest);
    EXPECT_GE(log.size(), 3u);
}

TEST(SocketTransport, UnknownPeerFaults) {
    SlotGuard guard(9);
    EventLog log;
    SocketDirectory dir;
    RealNodeClock clock(grid(), std::chrono::steady_clock::now(), 1.0);
    SocketTransport master(0, clock, dir, guard, log, 500ms);
    guard.begin_slot(0, 0, {4});
    EXPECT_THROW(master.send(batch_to(4)), ProtocolFault);
}

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <mutex>
#include <vector>

#include "spmul/error.hpp"
#include "spmul/wire.hpp"

namespace spmul {

// Raised in blocked or later calls once the transport has been closed.
class TransportClosedError : public TransportError {
public:
    TransportClosedError() : TransportError("transport closed") {}
};

// Point-to-point message passing between nodes 0..nodes()-1. Delivery is
// FIFO per (sender, receiver) pair and lossless.
class Transport {
public:
    virtual ~Transport() = default;

    virtual std::size_t nodes() const = 0;
    virtual void send(std::size_t from, std::size_t to, Bytes frame) = 0;
    // Delivers one copy to every node except `from`; counted as one message.
    virtual void broadcast(std::size_t from, const Bytes& frame) = 0;
    // Blocks until a frame from `from` is available at `at`.
    virtual Bytes receive(std::size_t at, std::size_t from) = 0;
    // Fails all pending and future calls with TransportClosedError.
    virtual void close() = 0;

    virtual std::uint64_t messages() const = 0;
    // Bytes delivered to nodes other than the sender.
    virtual std::uint64_t bytes() const = 0;
};

// Reference transport: one queue per ordered node pair, guarded by a
// single mutex.
class InProcessTransport final : public Transport {
public:
    explicit InProcessTransport(std::size_t nodes,
                                std::chrono::milliseconds receive_timeout = std::chrono::minutes(10));

    std::size_t nodes() const override { return nodes_; }
    void send(std::size_t from, std::size_t to, Bytes frame) override;
    void broadcast(std::size_t from, const Bytes& frame) override;
    Bytes receive(std::size_t at, std::size_t from) override;
    void close() override;

    std::uint64_t messages() const override { return messages_.load(); }
    std::uint64_t bytes() const override { return bytes_.load(); }

    // Test hook: every send or broadcast after the first `count` throws
    // TransportError.
    void fail_after(std::uint64_t count);

private:
    void check_node(std::size_t node) const;
    void count_message(std::uint64_t delivered_bytes);

    std::size_t nodes_;
    std::chrono::milliseconds timeout_;
    std::mutex mutex_;
    std::condition_variable ready_;
    std::vector<std::deque<Bytes>> queues_;
    bool closed_ = false;
    std::uint64_t fail_after_ = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> messages_{0};
    std::atomic<std::uint64_t> bytes_{0};
};

} // namespace spmul

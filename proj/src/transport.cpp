#include "spmul/transport.hpp"

#include <stdexcept>
#include <string>

namespace spmul {

InProcessTransport::InProcessTransport(std::size_t nodes, std::chrono::milliseconds receive_timeout)
    : nodes_(nodes), timeout_(receive_timeout), queues_(nodes * nodes) {
    if (nodes == 0)
        throw std::invalid_argument("transport needs at least one node");
}

void InProcessTransport::check_node(std::size_t node) const {
    if (node >= nodes_)
        throw TransportError("node " + std::to_string(node) + " does not exist");
}

// Caller holds the mutex.
void InProcessTransport::count_message(std::uint64_t delivered_bytes) {
    if (closed_)
        throw TransportClosedError();
    if (messages_.load() >= fail_after_)
        throw TransportError("injected send failure");
    messages_.fetch_add(1);
    bytes_.fetch_add(delivered_bytes);
}

void InProcessTransport::send(std::size_t from, std::size_t to, Bytes frame) {
    check_node(from);
    check_node(to);
    {
        std::lock_guard lock(mutex_);
        count_message(from == to ? 0 : frame.size());
        queues_[from * nodes_ + to].push_back(std::move(frame));
    }
    ready_.notify_all();
}

void InProcessTransport::broadcast(std::size_t from, const Bytes& frame) {
    check_node(from);
    {
        std::lock_guard lock(mutex_);
        count_message(frame.size() * (nodes_ - 1));
        for (std::size_t to = 0; to < nodes_; ++to)
            if (to != from)
                queues_[from * nodes_ + to].push_back(frame);
    }
    ready_.notify_all();
}

Bytes InProcessTransport::receive(std::size_t at, std::size_t from) {
    check_node(at);
    check_node(from);
    std::unique_lock lock(mutex_);
    auto& q = queues_[from * nodes_ + at];
    if (!ready_.wait_for(lock, timeout_, [&] { return closed_ || !q.empty(); }))
        throw TransportError("receive timed out at node " + std::to_string(at));
    if (closed_)
        throw TransportClosedError();
    Bytes frame = std::move(q.front());
    q.pop_front();
    return frame;
}

void InProcessTransport::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    ready_.notify_all();
}

void InProcessTransport::fail_after(std::uint64_t count) {
    std::lock_guard lock(mutex_);
    fail_after_ = count;
}

} // namespace spmul

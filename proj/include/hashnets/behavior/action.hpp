#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hashnets {

// Byte offset plus 1-based line/column of a construct in its source text.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    int line = 0;
    int column = 0;
};

}  // namespace hashnets

namespace hashnets::behavior {

struct Conjunction {
    bool bracketed = false;
    std::vector<std::string> ports;

    bool operator==(const Conjunction&) const = default;
};

// Disjunctive normal form: c1 | c2 | ... with each ci a conjunction.
struct StreamPredicate {
    std::vector<Conjunction> disjuncts;

    bool operator==(const StreamPredicate&) const = default;
    [[nodiscard]] std::vector<std::string> ports() const;
};

enum class Polarity { send, receive };

enum class ActionKind {
    skip,
    seq,
    par,
    alt,
    repeat_until,
    repeat_counter,
    repeat_forever,
    if_then_else,
    signal,
    wait,
    activate,
    do_collective,
};

struct Action {
    ActionKind kind = ActionKind::skip;
    // seq/par/alt: branches; repeat*: [body]; if: [then, else].
    std::vector<Action> children;
    StreamPredicate predicate;  // repeat_until, if_then_else
    int count = 0;              // repeat_counter
    std::string id;             // semaphore, port/group, collective port
    Polarity polarity = Polarity::send;
    Span span;

    // Structural equality; spans are ignored.
    bool operator==(const Action& other) const;
};

[[nodiscard]] Action skip();
[[nodiscard]] Action seq(std::vector<Action> parts);
[[nodiscard]] Action par(std::vector<Action> parts);
[[nodiscard]] Action alt(std::vector<Action> parts);
[[nodiscard]] Action repeat_until(Action body, StreamPredicate pred);
[[nodiscard]] Action repeat_counter(Action body, int n);
[[nodiscard]] Action repeat_forever(Action body);
[[nodiscard]] Action if_then_else(StreamPredicate pred, Action then_branch, Action else_branch);
[[nodiscard]] Action signal(std::string sem);
[[nodiscard]] Action wait(std::string sem);
[[nodiscard]] Action send(std::string port);
[[nodiscard]] Action receive(std::string port);
[[nodiscard]] Action do_collective(std::string port);

// Single stream variable, or a conjunction of variables, without brackets.
[[nodiscard]] StreamPredicate var(std::string port);

[[nodiscard]] const char* kind_name(ActionKind k);

// Every (id, polarity) activated anywhere inside `a`, in pre-order.
void collect_activations(const Action& a, std::vector<const Action*>& out);

}  // namespace hashnets::behavior

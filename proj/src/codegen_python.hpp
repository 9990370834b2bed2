#pragma once

// Python target templates. Placeholders are `{{NAME}}`; nothing else in
// these strings may contain two consecutive opening braces.

#include <string_view>

namespace rlml::templates::python {

inline constexpr std::string_view kRoot = R"TPL(#!/usr/bin/env python3
# {{MODEL_NAME}}: generated by rlml from an RLML model. Do not edit.
#
# Usage: python3 {{FILENAME}} [seed]

import math
import sys
import time

STATES = {{STATES}}
ACTIONS = {{ACTIONS}}
REWARDS = {{REWARDS}}
TERMINAL_STATES = {{TERMINALS}}
STEP_CAP = 100 * len(STATES)

MASK64 = 0xFFFFFFFFFFFFFFFF


class SplitMix64:
    """64-bit SplitMix generator; same stream as the rlml engine."""

    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self):
        return (self.next() >> 11) * (1.0 / 9007199254740992.0)

    def below(self, n):
        return int(self.uniform() * n)


class Environment:
    def __init__(self):
        self.n = len(STATES)
        self.terminal = [name in TERMINAL_STATES for name in STATES]
        self.starts = [s for s in range(self.n) if not self.terminal[s]]

    def reset(self, rng):
        return self.starts[rng.below(len(self.starts))]

    def step(self, s, a):
        nxt = ACTIONS[s][a]
        return nxt, REWARDS[s][nxt], self.terminal[nxt]


def zeros(n):
    return [[0.0] * n for _ in range(n)]


def argmax(values):
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return best


def allowed_values(table, s):
    return [table[s][t] for t in ACTIONS[s]]


def epsilon_greedy(values, epsilon, rng):
    if rng.uniform() < epsilon:
        return rng.below(len(values))
    return argmax(values)


def softmax(prefs):
    top = prefs[argmax(prefs)]
    out = [math.exp(p - top) for p in prefs]
    total = 0.0
    for p in out:
        total += p
    return [p / total for p in out]


def sample(probs, rng):
    u = rng.uniform()
    cumulative = 0.0
    for i, p in enumerate(probs):
        cumulative += p
        if u < cumulative:
            return i
    return len(probs) - 1

{{ALGORITHMS}}

def derive_policy(env, table):
    policy = [None] * env.n
    for s in range(env.n):
        if not env.terminal[s]:
            policy[s] = ACTIONS[s][argmax(allowed_values(table, s))]
    return policy


def render_result(env, header, table, policy):
    lines = [header + ":"]
    for s in range(env.n):
        cells = ", ".join("%.2f" % v for v in table[s])
        lines.append("%s: [%s]" % (STATES[s], cells))
    lines.append("")
    lines.append("Policy:")
    for s in range(env.n):
        if policy[s] is not None:
            lines.append("%s -> %s" % (STATES[s], STATES[policy[s]]))
    return "\n".join(lines) + "\n"

{{ENTRY}}

if __name__ == "__main__":
    run(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
)TPL";

inline constexpr std::string_view kEntrySingle = R"TPL(
HYPERPARAMETERS = {{HYPERPARAMETERS}}


def run(seed=0):
    env = Environment()
    header, table = {{TRAINER}}(env, HYPERPARAMETERS, seed)
    policy = derive_policy(env, table)
    sys.stdout.write(render_result(env, header, table, policy))
    return policy
)TPL";

inline constexpr std::string_view kEntryComparator = R"TPL(
AGENTS = [
{{AGENTS}}]


def run(seed=0):
    env = Environment()
    blocks = []
    policies = []
    for k, (label, trainer, hp) in enumerate(AGENTS):
        start = time.perf_counter()
        header, table = trainer(env, hp, seed + k)
        elapsed_ms = int((time.perf_counter() - start) * 1000)
        policy = derive_policy(env, table)
        policies.append(policy)
        blocks.append("=== %s ===\n%swall_time_ms: %d\n"
                      % (label, render_result(env, header, table, policy), elapsed_ms))
    sys.stdout.write("\n".join(blocks))
    return policies
)TPL";

inline constexpr std::string_view kQLearning = R"TPL(

def train_q_learning(env, hp, seed):
    rng = SplitMix64(seed)
    q = zeros(env.n)
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        steps = 0
        while steps < STEP_CAP:
            a = epsilon_greedy(allowed_values(q, s), hp["epsilon"], rng)
            nxt, r, done = env.step(s, a)
            best = 0.0
            if not done:
                values = allowed_values(q, nxt)
                best = values[argmax(values)]
            q[s][nxt] += hp["alpha"] * (r + hp["gamma"] * best - q[s][nxt])
            steps += 1
            s = nxt
            if done:
                break
    return "Q-Table", q
)TPL";

inline constexpr std::string_view kSarsa = R"TPL(

def train_sarsa(env, hp, seed):
    rng = SplitMix64(seed)
    q = zeros(env.n)
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        a = epsilon_greedy(allowed_values(q, s), hp["epsilon"], rng)
        steps = 0
        while steps < STEP_CAP:
            nxt, r, done = env.step(s, a)
            next_value = 0.0
            next_a = 0
            if not done:
                next_a = epsilon_greedy(allowed_values(q, nxt), hp["epsilon"], rng)
                next_value = q[nxt][ACTIONS[nxt][next_a]]
            q[s][nxt] += hp["alpha"] * (r + hp["gamma"] * next_value - q[s][nxt])
            steps += 1
            s = nxt
            a = next_a
            if done:
                break
    return "Q-Table", q
)TPL";

inline constexpr std::string_view kActorCritic = R"TPL(

def train_actor_critic(env, hp, seed):
    rng = SplitMix64(seed)
    v = [0.0] * env.n
    h = zeros(env.n)
    for _ in range(hp["total_episodes"]):
        s = env.reset(rng)
        steps = 0
        while steps < STEP_CAP:
            a = sample(softmax(allowed_values(h, s)), rng)
            nxt, r, done = env.step(s, a)
            next_value = 0.0 if done else v[nxt]
            delta = r + hp["gamma"] * next_value - v[s]
            v[s] += hp["beta"] * delta
            probs = softmax(allowed_values(h, s))
            for b, t in enumerate(ACTIONS[s]):
                grad = (1.0 if b == a else 0.0) - probs[b]
                h[s][t] += hp["alpha"] * delta * grad
            steps += 1
            s = nxt
            if done:
                break
    return "Preferences", h
)TPL";

inline constexpr std::string_view kMonteCarlo = R"TPL(

def train_monte_carlo(env, hp, seed):
    rng = SplitMix64(seed)
    q = zeros(env.n)
    visits = zeros(env.n)
    for _ in range(hp["total_episodes"]):
        episode = []
        s = env.reset(rng)
        while len(episode) < STEP_CAP:
            a = epsilon_greedy(allowed_values(q, s), hp["epsilon"], rng)
            nxt, r, done = env.step(s, a)
            episode.append((s, nxt, r))
            s = nxt
            if done:
                break
        seen = set()
        first = []
        for s, nxt, _ in episode:
            first.append((s, nxt) not in seen)
            seen.add((s, nxt))
        g = 0.0
        for t in range(len(episode) - 1, -1, -1):
            s, nxt, r = episode[t]
            g = r + hp["gamma"] * g
            if first[t]:
                visits[s][nxt] += 1.0
                q[s][nxt] += (g - q[s][nxt]) / visits[s][nxt]
    return "Q-Table", q
)TPL";

}  // namespace rlml::templates::python

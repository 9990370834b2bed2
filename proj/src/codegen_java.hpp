#pragma once

// Java target templates. Placeholders are `{{NAME}}`; nothing else in
// these strings may contain two consecutive opening braces.

#include <string_view>

namespace rlml::templates::java {

inline constexpr std::string_view kRoot = R"TPL(// {{MODEL_NAME}}: generated by rlml from an RLML model. Do not edit.
//
// Usage: java {{FILENAME}} [seed]

import java.math.BigDecimal;
import java.math.RoundingMode;
import java.util.ArrayList;
import java.util.HashSet;
import java.util.List;
import java.util.Set;

public class {{MODEL_NAME}} {
    static final String[] STATES = {{STATES}};
    static final int[][] ACTIONS = {{ACTIONS}};
    static final double[][] REWARDS = {{REWARDS}};
    static final String[] TERMINAL_STATES = {{TERMINALS}};
    static final int N = STATES.length;
    static final int STEP_CAP = 100 * N;
    static final boolean[] TERMINAL = new boolean[N];
    static final int[] STARTS;

    static {
        int count = 0;
        for (int s = 0; s < N; s++) {
            for (String t : TERMINAL_STATES) {
                if (t.equals(STATES[s])) {
                    TERMINAL[s] = true;
                }
            }
            if (!TERMINAL[s]) {
                count++;
            }
        }
        STARTS = new int[count];
        int k = 0;
        for (int s = 0; s < N; s++) {
            if (!TERMINAL[s]) {
                STARTS[k++] = s;
            }
        }
    }

    /** 64-bit SplitMix generator; same stream as the rlml engine. */
    static final class SplitMix64 {
        private long state;

        SplitMix64(long seed) {
            state = seed;
        }

        long next() {
            state += 0x9E3779B97F4A7C15L;
            long z = state;
            z = (z ^ (z >>> 30)) * 0xBF58476D1CE4E5B9L;
            z = (z ^ (z >>> 27)) * 0x94D049BB133111EBL;
            return z ^ (z >>> 31);
        }

        double uniform() {
            return (next() >>> 11) * 0x1.0p-53;
        }

        int below(int n) {
            return (int) (uniform() * n);
        }
    }

    static final class Hyper {
        final double alpha;
        final double gamma;
        final double epsilon;
        final double beta;
        final long totalEpisodes;

        Hyper(double alpha, double gamma, double epsilon, double beta, long totalEpisodes) {
            this.alpha = alpha;
            this.gamma = gamma;
            this.epsilon = epsilon;
            this.beta = beta;
            this.totalEpisodes = totalEpisodes;
        }
    }

    static final class Result {
        final String header;
        final double[][] table;

        Result(String header, double[][] table) {
            this.header = header;
            this.table = table;
        }
    }

    interface Trainer {
        Result train(Hyper hp, long seed);
    }

    static int reset(SplitMix64 rng) {
        return STARTS[rng.below(STARTS.length)];
    }

    static double[][] zeros() {
        return new double[N][N];
    }

    static int argmax(double[] values) {
        int best = 0;
        for (int i = 1; i < values.length; i++) {
            if (values[i] > values[best]) {
                best = i;
            }
        }
        return best;
    }

    static double[] allowedValues(double[][] table, int s) {
        double[] out = new double[ACTIONS[s].length];
        for (int i = 0; i < out.length; i++) {
            out[i] = table[s][ACTIONS[s][i]];
        }
        return out;
    }

    static int epsilonGreedy(double[] values, double epsilon, SplitMix64 rng) {
        if (rng.uniform() < epsilon) {
            return rng.below(values.length);
        }
        return argmax(values);
    }

    static double[] softmax(double[] prefs) {
        double top = prefs[argmax(prefs)];
        double[] out = new double[prefs.length];
        double total = 0.0;
        for (int i = 0; i < prefs.length; i++) {
            out[i] = Math.exp(prefs[i] - top);
            total += out[i];
        }
        for (int i = 0; i < out.length; i++) {
            out[i] /= total;
        }
        return out;
    }

    static int sample(double[] probs, SplitMix64 rng) {
        double u = rng.uniform();
        double cumulative = 0.0;
        for (int i = 0; i < probs.length; i++) {
            cumulative += probs[i];
            if (u < cumulative) {
                return i;
            }
        }
        return probs.length - 1;
    }
{{ALGORITHMS}}
    static int[] derivePolicy(double[][] table) {
        int[] policy = new int[N];
        for (int s = 0; s < N; s++) {
            policy[s] = TERMINAL[s] ? -1 : ACTIONS[s][argmax(allowedValues(table, s))];
        }
        return policy;
    }

    // Two decimals, rounded half-even on the exact binary value like C's %.2f.
    static String format2(double v) {
        BigDecimal rounded = new BigDecimal(v).setScale(2, RoundingMode.HALF_EVEN);
        String text = rounded.toPlainString();
        if (rounded.signum() == 0 && (v < 0 || 1.0 / v < 0)) {
            text = "-" + text;
        }
        return text;
    }

    static String renderResult(Result result, int[] policy) {
        StringBuilder out = new StringBuilder();
        out.append(result.header).append(":\n");
        for (int s = 0; s < N; s++) {
            out.append(STATES[s]).append(": [");
            for (int t = 0; t < N; t++) {
                if (t > 0) {
                    out.append(", ");
                }
                out.append(format2(result.table[s][t]));
            }
            out.append("]\n");
        }
        out.append("\nPolicy:\n");
        for (int s = 0; s < N; s++) {
            if (policy[s] >= 0) {
                out.append(STATES[s]).append(" -> ").append(STATES[policy[s]]).append("\n");
            }
        }
        return out.toString();
    }
{{ENTRY}}
    public static void main(String[] args) {
        run(args.length > 0 ? Long.parseUnsignedLong(args[0]) : 0L);
    }
}
)TPL";

inline constexpr std::string_view kEntrySingle = R"TPL(
    static final Hyper HYPERPARAMETERS = {{HYPERPARAMETERS}};

    public static int[] run(long seed) {
        Result result = {{TRAINER}}(HYPERPARAMETERS, seed);
        int[] policy = derivePolicy(result.table);
        System.out.print(renderResult(result, policy));
        return policy;
    }
)TPL";

inline constexpr std::string_view kEntryComparator = R"TPL(
    static final String[] LABELS = {{LABELS}};
    static final Trainer[] TRAINERS = {{TRAINERS}};
    static final Hyper[] HYPERPARAMETERS = {{HYPERPARAMETERS}};

    public static List<int[]> run(long seed) {
        List<int[]> policies = new ArrayList<>();
        List<String> blocks = new ArrayList<>();
        for (int k = 0; k < LABELS.length; k++) {
            long start = System.nanoTime();
            Result result = TRAINERS[k].train(HYPERPARAMETERS[k], seed + k);
            long elapsedMs = (System.nanoTime() - start) / 1000000L;
            int[] policy = derivePolicy(result.table);
            policies.add(policy);
            blocks.add("=== " + LABELS[k] + " ===\n" + renderResult(result, policy)
                    + "wall_time_ms: " + elapsedMs + "\n");
        }
        System.out.print(String.join("\n", blocks));
        return policies;
    }
)TPL";

inline constexpr std::string_view kQLearning = R"TPL(
    static Result trainQLearning(Hyper hp, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        double[][] q = zeros();
        for (long e = 0; e < hp.totalEpisodes; e++) {
            int s = reset(rng);
            int steps = 0;
            while (steps < STEP_CAP) {
                int a = epsilonGreedy(allowedValues(q, s), hp.epsilon, rng);
                int next = ACTIONS[s][a];
                double r = REWARDS[s][next];
                boolean done = TERMINAL[next];
                double best = 0.0;
                if (!done) {
                    double[] values = allowedValues(q, next);
                    best = values[argmax(values)];
                }
                q[s][next] += hp.alpha * (r + hp.gamma * best - q[s][next]);
                steps++;
                s = next;
                if (done) {
                    break;
                }
            }
        }
        return new Result("Q-Table", q);
    }
)TPL";

inline constexpr std::string_view kSarsa = R"TPL(
    static Result trainSarsa(Hyper hp, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        double[][] q = zeros();
        for (long e = 0; e < hp.totalEpisodes; e++) {
            int s = reset(rng);
            int a = epsilonGreedy(allowedValues(q, s), hp.epsilon, rng);
            int steps = 0;
            while (steps < STEP_CAP) {
                int next = ACTIONS[s][a];
                double r = REWARDS[s][next];
                boolean done = TERMINAL[next];
                double nextValue = 0.0;
                int nextA = 0;
                if (!done) {
                    nextA = epsilonGreedy(allowedValues(q, next), hp.epsilon, rng);
                    nextValue = q[next][ACTIONS[next][nextA]];
                }
                q[s][next] += hp.alpha * (r + hp.gamma * nextValue - q[s][next]);
                steps++;
                s = next;
                a = nextA;
                if (done) {
                    break;
                }
            }
        }
        return new Result("Q-Table", q);
    }
)TPL";

inline constexpr std::string_view kActorCritic = R"TPL(
    static Result trainActorCritic(Hyper hp, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        double[] v = new double[N];
        double[][] h = zeros();
        for (long e = 0; e < hp.totalEpisodes; e++) {
            int s = reset(rng);
            int steps = 0;
            while (steps < STEP_CAP) {
                int a = sample(softmax(allowedValues(h, s)), rng);
                int next = ACTIONS[s][a];
                double r = REWARDS[s][next];
                boolean done = TERMINAL[next];
                double nextValue = done ? 0.0 : v[next];
                double delta = r + hp.gamma * nextValue - v[s];
                v[s] += hp.beta * delta;
                double[] probs = softmax(allowedValues(h, s));
                for (int b = 0; b < ACTIONS[s].length; b++) {
                    double grad = (b == a ? 1.0 : 0.0) - probs[b];
                    h[s][ACTIONS[s][b]] += hp.alpha * delta * grad;
                }
                steps++;
                s = next;
                if (done) {
                    break;
                }
            }
        }
        return new Result("Preferences", h);
    }
)TPL";

inline constexpr std::string_view kMonteCarlo = R"TPL(
    static Result trainMonteCarlo(Hyper hp, long seed) {
        SplitMix64 rng = new SplitMix64(seed);
        double[][] q = zeros();
        double[][] visits = zeros();
        for (long e = 0; e < hp.totalEpisodes; e++) {
            List<int[]> transitions = new ArrayList<>();
            List<Double> rewards = new ArrayList<>();
            int s = reset(rng);
            while (transitions.size() < STEP_CAP) {
                int a = epsilonGreedy(allowedValues(q, s), hp.epsilon, rng);
                int next = ACTIONS[s][a];
                transitions.add(new int[] {s, next});
                rewards.add(REWARDS[s][next]);
                s = next;
                if (TERMINAL[next]) {
                    break;
                }
            }
            boolean[] first = new boolean[transitions.size()];
            Set<Long> seen = new HashSet<>();
            for (int t = 0; t < transitions.size(); t++) {
                int[] tr = transitions.get(t);
                first[t] = seen.add((long) tr[0] * N + tr[1]);
            }
            double g = 0.0;
            for (int t = transitions.size() - 1; t >= 0; t--) {
                int[] tr = transitions.get(t);
                g = rewards.get(t) + hp.gamma * g;
                if (first[t]) {
                    visits[tr[0]][tr[1]] += 1.0;
                    q[tr[0]][tr[1]] += (g - q[tr[0]][tr[1]]) / visits[tr[0]][tr[1]];
                }
            }
        }
        return new Result("Q-Table", q);
    }
)TPL";

}  // namespace rlml::templates::java

#pragma once

// Attack constructions and reduction transforms as AdversaryPrograms.

#include "qtsl/arena.hpp"

namespace qtsl {

/// Grover search for a preimage of the challenge y (owf_y), T iterations of
/// oracle reflection and diffusion. Budget 2T: each iteration queries and
/// unqueries. Registers x0 (domain) and u0 (range); answer x0.
AdversaryProgram grover_invert(std::size_t N, std::size_t M, std::size_t T);
/// sin^2((2T+1) asin(sqrt(k/N))) for k marked points.
double grover_success(std::size_t N, std::size_t k, std::size_t T);

/// Legal multi-instance Grover: round i searches the only revealed target
/// that round i can be scored on, y_i.
AdversaryProgram iterated_grover_multi(std::size_t g, std::size_t T, std::size_t N, std::size_t M);

/// S = 1, T = 0: stores H(0); answers it on challenge 0, flips a coin otherwise.
AdversaryProgram yaobox_store_first(std::size_t N);

/// Stores floor(S / ceil(log2 M)) sums of H over blocks of T+1 salts.
/// Throws std::invalid_argument when the blocks do not fit in K salts.
AdversaryProgram salted_prediction_attack(std::size_t K, std::size_t M, std::size_t S, std::size_t T);

/// Queries H(0) and answers 0 iff the challenge equals it.
AdversaryProgram prg_first_point(std::size_t N, std::size_t M);

/// Stores one collision per salt for the first floor(S / (2 ceil(log2 N))) salts.
AdversaryProgram crh_store_collision(std::size_t S, std::size_t N, std::size_t M, std::size_t K);

/// Answers a fixed value without queries.
AdversaryProgram constant_guesser(const GameSpec& game, std::size_t answer, std::size_t rounds = 1);
/// Answers a uniform value without queries.
AdversaryProgram random_guesser(const GameSpec& game, std::size_t rounds = 1);

/// Quantum advice for owf at small N: one register per image y holding
/// sqrt(1-eta)|x*> + sqrt(eta)|x'> with x* the least preimage and x' = x*+1 mod N.
/// Images without preimage hold |0>. Answers by adding the challenge's register.
AdversaryProgram noisy_owf_advice(std::size_t N, std::size_t M, double eta);

/// Advice replaced by uniform advice (a uniform basis state for quantum advice).
AdversaryProgram remove_advice(const AdversaryProgram& adv);
/// Runs a single-instance adversary once per round on shared advice. Classical
/// memory is cleared per round; quantum workspace gets "@i" copies.
AdversaryProgram repeat_per_instance(const AdversaryProgram& adv, std::size_t g);

/// k copies of a single-instance quantum-advice adversary. Each round runs
/// every copy, checks it with the public verifier, submits the first valid
/// answer and uncomputes everything after the challenger hands it back.
/// Copy j of advice register a is "a#j"; workspace of round i is "w#j@i".
AdversaryProgram public_verif_wrapper(const AdversaryProgram& adv, std::size_t k, const GameSpec& game,
                                      std::size_t rounds);

/// Advice registers of the wrapper's copies.
std::vector<std::string> wrapper_advice_registers(const AdversaryProgram& adv, std::size_t k);

/// Builds a named adversary for a game ("grover", "iterated_grover",
/// "yaobox_store_first", "salted_prediction", "prg_first_point",
/// "crh_store_collision", "constant", "random", "noisy_owf_advice").
AdversaryProgram make_adversary(const std::string& name, const nlohmann::json& params, const GameSpec& game,
                                std::size_t S, std::size_t T, std::size_t g);

std::size_t ceil_log2(std::size_t n);

namespace quarantine {

/// Outside the game interface: knows all g targets up front. Each phase runs
/// T Grover iterations over the union of unsolved targets, measures, and
/// spends one query to see which target it hit. Wins when every target gets
/// a preimage. Exact win probability over the weighted tables and uniform targets.
double parallel_grover_win(std::size_t N, std::size_t M, std::size_t g, std::size_t T,
                           const std::vector<std::pair<TruthTable, double>>& tables, Exec exec = Exec::Parallel);

}  // namespace quarantine

}  // namespace qtsl

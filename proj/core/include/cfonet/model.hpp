// Copyright 2026 The cfonet Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cfonet/corpus.hpp"
#include "cfonet/encoder.hpp"
#include "cfonet/fusion.hpp"
#include "cfonet/memory.hpp"
#include "cfonet/model_config.hpp"
#include "cfonet/vocab.hpp"

#include <map>
#include <memory>
#include <optional>

namespace cfonet {

enum class Phase { train, eval };

struct TurnPrediction {
    Vector strategy_probs;                   // y^s over L
    std::optional<Vector> emotion_probs;     // y^e over {pos, neu, neg}
    int predicted_strategy = 0;              // argmax y^s
    Vector alpha;                            // context-only distribution (empty under no_memory)
};

/// Intermediate values of one turn, for analysis and tests.
struct TurnTrace {
    MaskPair masks;
    Vector gamma_before;
    Vector gamma_after;
    bool gamma_updated = false;
    std::optional<FeedbackEntry> feedback;
    std::size_t pool_size = 0;
    Matrix emotion_aware;                    // S'
    std::optional<Vector> context_head;
    std::optional<Vector> strategy_head;
};

struct TurnOutput {
    TurnPrediction prediction;
    TurnTrace trace;
    ag::Var strategy_probs;
    std::optional<ag::Var> emotion_probs;
};

/// The full network: encoder, strategy embedding with memory heads, fusion.
class CfoNet {
public:
    /// Registers all parameters and initializes them from config.seed.
    CfoNet(ModelConfig config, Vocab vocab);

    CfoNet(const CfoNet&) = delete;
    CfoNet& operator=(const CfoNet&) = delete;

    const ModelConfig& config() const { return config_; }
    const Vocab& vocab() const { return vocab_; }
    ParameterStore& parameters() { return params_; }
    const ParameterStore& parameters() const { return params_; }
    const Encoder& encoder() const { return *encoder_; }
    const MemoryModule& memory() const { return *memory_; }
    const Fusion& fusion() const { return *fusion_; }

    /// Re-draws parameters from `seed` and re-zeroes the padding embedding.
    void initialize(std::uint64_t seed);
    /// Call after modifying parameters externally (keeps padding row at zero).
    void sync_frozen();

    /// Switches ablation flags without touching parameters.
    void set_ablation(const AblationFlags& flags) { config_.ablation = flags; }

private:
    ModelConfig config_;
    Vocab vocab_;
    ParameterStore params_;
    std::unique_ptr<Encoder> encoder_;
    std::unique_ptr<MemoryModule> memory_;
    std::unique_ptr<Fusion> fusion_;
};

/// Processes the labeled persuader turns of one dialogue in order, carrying
/// the memory state between them. All values live on `tape`; utterance
/// encodings are shared between the turns that contain them.
class DialogueRunner {
public:
    DialogueRunner(const CfoNet& model, ag::Tape& tape, Phase phase);

    /// Rejects examples from another dialogue, or not strictly after the
    /// previous target turn.
    TurnOutput forward_turn(const StrategyExample& example);

    const MemoryState& state() const { return state_; }
    MemoryState& state() { return state_; }
    /// Fresh memory for the next dialogue; cached encodings are dropped.
    void reset();

private:
    ag::Var utterance_vector(const StrategyExample& example, std::size_t i);

    const CfoNet& model_;
    ag::Tape& tape_;
    Phase phase_;
    MemoryState state_;
    std::map<int, ag::Var> cache_;
};

/// One dialogue's turns from a fresh state, values only.
std::vector<TurnOutput> run_dialogue(const CfoNet& model, const std::vector<StrategyExample>& examples,
                                     ag::Tape& tape, Phase phase = Phase::eval);

}  // namespace cfonet

import numpy as np
import pytest

from conftest import random_walk_series
from quantrl import EnvConfig, IndicatorSpec, TradingEnv, compute_feature_matrix
from quantrl.agents import (
    ActorCritic,
    DqnTrainer,
    Hyperparams,
    MlpPolicy,
    ReplayBuffer,
    Transition,
    a2c_train,
    dqn_train,
    gae_advantages,
    init_mlp,
    load_policy,
    mlp_forward,
    n_step_returns,
    policy_gradient_loss,
    ppo_train,
    save_policy,
    value_loss,
)
from quantrl.errors import BufferTooSmall, CorruptFile, ShapeMismatch


def tiny_env(n=60, seed=3, **config_kwargs) -> TradingEnv:
    series = random_walk_series(n, seed=seed)
    features = compute_feature_matrix(series, [IndicatorSpec("SMA", 2)])
    return TradingEnv(series, features, EnvConfig(window_size=2, **config_kwargs))


def tiny_hp(**overrides) -> Hyperparams:
    base = dict(
        learning_rate=1e-3, buffer_size=64, batch_size=8, gamma=0.9,
        target_update_interval=7, total_timesteps=300,
        exploration_fraction=0.5, n_steps=8, n_epochs=2, hidden_sizes=(8,),
    )
    base.update(overrides)
    return Hyperparams(**base)


# --- replay buffer ---------------------------------------------------------------


def transition(value: float) -> Transition:
    return Transition(np.array([value]), 0, value, np.array([value]), False)


def test_replay_evicts_oldest():
    buf = ReplayBuffer(2)
    for v in (1.0, 2.0, 3.0):
        buf.push(transition(v))
    assert len(buf) == 2
    assert buf.insertions == 3
    stored = {buf._rewards[i] for i in range(2)}
    assert stored == {2.0, 3.0}


def test_replay_sample_too_small():
    buf = ReplayBuffer(10)
    buf.push(transition(1.0))
    with pytest.raises(BufferTooSmall):
        buf.sample(2, np.random.default_rng(0))


def test_replay_uniformity():
    buf = ReplayBuffer(4)
    for v in (0.0, 1.0, 2.0, 3.0):
        buf.push(transition(v))
    rng = np.random.default_rng(1)
    draws = np.concatenate([buf.sample(4, rng).rewards for _ in range(25_000)])
    for v in (0.0, 1.0, 2.0, 3.0):
        freq = np.mean(draws == v)
        assert abs(freq - 0.25) <= 0.25 * 0.05


def test_replay_sampling_seeded():
    buf = ReplayBuffer(8)
    for v in range(8):
        buf.push(transition(float(v)))
    a = buf.sample(8, np.random.default_rng(9)).rewards
    b = buf.sample(8, np.random.default_rng(9)).rewards
    assert np.array_equal(a, b)


# --- policy persistence -----------------------------------------------------------


def test_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    policy = init_mlp([6, 8, 2], rng)
    path = tmp_path / "policy.bin"
    save_policy(policy, path)
    loaded = load_policy(path)
    assert loaded.layer_sizes == policy.layer_sizes
    for a, b in zip(policy.parameters(), loaded.parameters()):
        assert np.array_equal(a, b)
    x = rng.normal(size=(5, 6))
    assert np.array_equal(mlp_forward(policy, x), mlp_forward(loaded, x))


def test_load_truncated_file(tmp_path):
    rng = np.random.default_rng(1)
    policy = init_mlp([4, 4, 2], rng)
    path = tmp_path / "p.bin"
    save_policy(policy, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) - 16])
    with pytest.raises(CorruptFile):
        load_policy(path)


def test_load_bad_magic(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"NOPE" + b"\x00" * 40)
    with pytest.raises(CorruptFile):
        load_policy(path)


def test_header_sizes_cross_checked(tmp_path):
    import struct

    rng = np.random.default_rng(2)
    policy = init_mlp([3, 4, 2], rng)
    path = tmp_path / "p.bin"
    save_policy(policy, path)
    data = bytearray(path.read_bytes())
    # corrupt a header size field: payload length no longer matches
    struct.pack_into("<I", data, 12, 99)
    path.write_bytes(bytes(data))
    with pytest.raises(CorruptFile):
        load_policy(path)


def test_zero_layer_header_rejected(tmp_path):
    import struct

    path = tmp_path / "z.bin"
    path.write_bytes(b"QRLP" + struct.pack("<II", 1, 0))
    with pytest.raises(ShapeMismatch):
        load_policy(path)


# --- DQN --------------------------------------------------------------------------


def test_dqn_target_sync_only_at_interval():
    trainer = DqnTrainer(tiny_env(), tiny_hp(), seed=0)
    interval = trainer.hp.target_update_interval

    def snapshot(policy: MlpPolicy):
        return [p.copy() for p in policy.parameters()]

    reference = snapshot(trainer.target)
    for _ in range(3 * interval):
        trainer.train_step()
        same = all(
            np.array_equal(a, b)
            for a, b in zip(snapshot(trainer.target), reference)
        )
        if trainer.step_count % interval == 0:
            reference = snapshot(trainer.target)
        else:
            assert same, f"target changed off-interval at step {trainer.step_count}"


def test_dqn_epsilon_anneals():
    trainer = DqnTrainer(tiny_env(), tiny_hp(), seed=0)
    assert trainer.epsilon == 1.0
    while trainer.step_count < 150:
        trainer.train_step()
    assert trainer.epsilon == 0.05


def test_dqn_determinism():
    def run():
        policy, log = dqn_train(lambda: tiny_env(), tiny_hp(), seed=11)
        return policy, log

    p1, l1 = run()
    p2, l2 = run()
    for a, b in zip(p1.parameters(), p2.parameters()):
        assert np.array_equal(a, b)
    assert len(l1) == len(l2)
    for r1, r2 in zip(l1.records, l2.records):
        assert r1 == r2


def test_dqn_different_seeds_differ():
    p1, _ = dqn_train(lambda: tiny_env(), tiny_hp(), seed=1)
    p2, _ = dqn_train(lambda: tiny_env(), tiny_hp(), seed=2)
    assert any(not np.array_equal(a, b) for a, b in zip(p1.parameters(), p2.parameters()))


def test_training_log_csv(tmp_path):
    _, log = dqn_train(lambda: tiny_env(), tiny_hp(total_timesteps=120), seed=5)
    assert len(log) >= 1
    steps = [r.timestep for r in log.records]
    assert steps == sorted(set(steps))
    path = tmp_path / "log.csv"
    log.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "timestep,episode_return,loss,epsilon,eval_return"
    assert len(lines) == len(log) + 1


# --- A2C / PPO ---------------------------------------------------------------------


def test_n_step_returns_single_step_gamma_zero():
    returns = n_step_returns(np.array([2.0]), np.array([False]), bootstrap=9.0, gamma=0.0)
    assert returns[0] == 2.0


def test_n_step_returns_hand_rollout():
    rewards = np.array([1.0, 2.0, 3.0])
    dones = np.array([False, False, False])
    returns = n_step_returns(rewards, dones, bootstrap=4.0, gamma=0.5)
    # R2 = 3 + 0.5*4 = 5; R1 = 2 + 0.5*5 = 4.5; R0 = 1 + 0.5*4.5 = 3.25
    assert returns.tolist() == [3.25, 4.5, 5.0]


def test_n_step_returns_cut_at_done():
    rewards = np.array([1.0, 2.0])
    dones = np.array([True, False])
    returns = n_step_returns(rewards, dones, bootstrap=10.0, gamma=0.9)
    assert returns[1] == pytest.approx(2.0 + 0.9 * 10.0)
    assert returns[0] == 1.0


def test_a2c_loss_hand_value():
    # one transition, tiny linear nets: verify the assembled loss by hand
    actor = MlpPolicy([np.array([[0.3, -0.1], [-0.2, 0.4]])], [np.array([0.1, 0.0])])
    critic = MlpPolicy([np.array([[0.5], [0.5]])], [np.array([0.0])])
    state = np.array([[1.0, 2.0]])
    logits = state @ actor.weights[0] + actor.biases[0]
    probs = np.exp(logits[0]) / np.exp(logits[0]).sum()
    advantage = np.array([0.7])
    expected_entropy = -(probs * np.log(probs)).sum()
    expected = -np.log(probs[1]) * 0.7 - 0.01 * expected_entropy
    loss, _ = policy_gradient_loss(actor, state, np.array([1]), advantage, 0.01)
    assert loss == pytest.approx(float(expected), abs=1e-12)
    v = float((state @ critic.weights[0] + critic.biases[0])[0, 0])
    vloss, _ = value_loss(critic, state, np.array([2.0]))
    assert vloss == pytest.approx((v - 2.0) ** 2, abs=1e-12)


def test_gae_reduces_to_td_for_lambda_zero():
    rewards = np.array([1.0, 2.0])
    values = np.array([0.5, 0.25])
    dones = np.array([False, False])
    adv, returns = gae_advantages(rewards, values, dones, last_value=3.0, gamma=0.9, lam=0.0)
    assert adv[0] == pytest.approx(1.0 + 0.9 * 0.25 - 0.5)
    assert adv[1] == pytest.approx(2.0 + 0.9 * 3.0 - 0.25)
    assert np.allclose(returns, adv + values)


def test_gae_matches_n_step_for_lambda_one():
    rng = np.random.default_rng(0)
    rewards = rng.normal(size=6)
    values = rng.normal(size=6)
    dones = np.zeros(6, dtype=bool)
    adv, _ = gae_advantages(rewards, values, dones, last_value=0.3, gamma=0.95, lam=1.0)
    returns = n_step_returns(rewards, dones, bootstrap=0.3, gamma=0.95)
    assert np.allclose(adv, returns - values, atol=1e-12)


def test_a2c_train_runs_and_is_deterministic():
    hp = tiny_hp(total_timesteps=150)
    ac1, log1 = a2c_train(lambda: tiny_env(), hp, seed=4)
    ac2, log2 = a2c_train(lambda: tiny_env(), hp, seed=4)
    assert isinstance(ac1, ActorCritic)
    for a, b in zip(ac1.actor.parameters(), ac2.actor.parameters()):
        assert np.array_equal(a, b)
    assert [r.timestep for r in log1.records] == [r.timestep for r in log2.records]


def test_ppo_train_runs_and_is_deterministic():
    hp = tiny_hp(total_timesteps=150, n_steps=16, batch_size=8)
    ac1, log1 = ppo_train(lambda: tiny_env(), hp, seed=4)
    ac2, log2 = ppo_train(lambda: tiny_env(), hp, seed=4)
    for a, b in zip(ac1.actor.parameters(), ac2.actor.parameters()):
        assert np.array_equal(a, b)
    assert len(log1) == len(log2)


def test_hyperparams_validation():
    with pytest.raises(ValueError):
        Hyperparams(batch_size=200, buffer_size=100)
    with pytest.raises(ValueError):
        Hyperparams(gamma=1.5)
    with pytest.raises(ValueError):
        Hyperparams(clip_range=0.0)
    with pytest.raises(ValueError):
        Hyperparams(optimizer="rmsprop")

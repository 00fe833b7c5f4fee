"""Proximal policy optimization: clipped surrogate over GAE advantages."""

from __future__ import annotations

import numpy as np

from .a2c import ActorCritic, _Rollout, sample_action
from .common import Hyperparams, TrainingLog, TrainingRecord
from .losses import ppo_policy_loss, value_loss
from .mlp import init_mlp, log_softmax, mlp_forward
from .optim import make_optimizer


def gae_advantages(rewards: np.ndarray, values: np.ndarray, dones: np.ndarray,
                   last_value: float, gamma: float, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Generalized advantage estimation; returns (advantages, value targets)."""
    n = len(rewards)
    advantages = np.empty(n)
    running = 0.0
    for t in range(n - 1, -1, -1):
        next_value = last_value if t == n - 1 else values[t + 1]
        not_done = 0.0 if dones[t] else 1.0
        delta = rewards[t] + gamma * next_value * not_done - values[t]
        running = delta + gamma * lam * not_done * running
        advantages[t] = running
    return advantages, advantages + values


def ppo_train(env_factory, hyperparams: Hyperparams, seed: int) -> tuple[ActorCritic, TrainingLog]:
    """n_steps rollouts optimized for n_epochs of shuffled minibatches."""
    hp = hyperparams
    env = env_factory()
    rng = np.random.default_rng(seed)
    actor = init_mlp([env.observation_size, *hp.hidden_sizes, 2], rng)
    critic = init_mlp([env.observation_size, *hp.hidden_sizes, 1], rng)
    actor_opt = make_optimizer(hp.optimizer, hp.learning_rate)
    critic_opt = make_optimizer(hp.optimizer, hp.learning_rate)
    log = TrainingLog()
    rollout = _Rollout(hp.n_steps, env.observation_size)
    obs = env.reset(seed).flatten()
    episode_return = 0.0
    last_loss = float("nan")
    steps = 0
    minibatch = min(hp.batch_size, hp.n_steps)
    while steps < hp.total_timesteps:
        action = sample_action(actor, obs, rng)
        result = env.step(action)
        rollout.add(obs, action, result.reward, result.done)
        episode_return += result.reward
        obs = result.observation.flatten()
        steps += 1
        if result.done:
            log.append(TrainingRecord(steps, episode_return, last_loss))
            episode_return = 0.0
            obs = env.reset(seed).flatten()
        if rollout.full:
            values = mlp_forward(critic, rollout.states)[:, 0]
            last_value = float(mlp_forward(critic, obs)[0])
            advantages, returns = gae_advantages(
                rollout.rewards, values, rollout.dones, last_value, hp.gamma, hp.gae_lambda
            )
            logp_old = log_softmax(mlp_forward(actor, rollout.states))[
                np.arange(hp.n_steps), rollout.actions
            ]
            for _ in range(hp.n_epochs):
                order = rng.permutation(hp.n_steps)
                for lo in range(0, hp.n_steps, minibatch):
                    idx = order[lo : lo + minibatch]
                    actor_loss, actor_grads = ppo_policy_loss(
                        actor, rollout.states[idx], rollout.actions[idx],
                        logp_old[idx], advantages[idx], hp.clip_range, hp.entropy_coef,
                    )
                    critic_loss, critic_grads = value_loss(critic, rollout.states[idx], returns[idx])
                    actor_opt.update(actor.parameters(), actor_grads)
                    critic_opt.update(critic.parameters(), [g * hp.value_coef for g in critic_grads])
                    last_loss = actor_loss + hp.value_coef * critic_loss
            rollout.clear()
    return ActorCritic(actor, critic), log

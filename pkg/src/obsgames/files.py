"""JSON file formats for games, uniform profiles, and solver reports."""

from __future__ import annotations

import json

from . import game as gm
from . import logic
from .game import UniformProfile, UniformStrategy, class_keys, s_empty
from .translate import BooleanGame


def game_to_dict(game, kind=None):
    data = {
        "players": game.n,
        "variables": {
            str(i): game.names_of(game.player_mask[i - 1]) for i in game.players()
        },
        "goals": {str(i): logic.pretty(game.goals[i - 1]) for i in game.players()},
    }
    if kind or isinstance(game, BooleanGame):
        data["kind"] = kind or "boolean"
    return data


def game_from_dict(data):
    n = data["players"]
    variables = {int(i): list(vs) for i, vs in data.get("variables", {}).items()}
    for i in range(1, n + 1):
        variables.setdefault(i, [])
    goals = {int(i): text for i, text in data["goals"].items()}
    if sorted(goals) != list(range(1, n + 1)):
        raise ValueError("goals must cover players 1..n")
    if data.get("kind") == "boolean":
        return BooleanGame.make(variables, goals)
    return gm.ObservationGame.make(variables, goals)


def load_game(path):
    with open(path) as fh:
        return game_from_dict(json.load(fh))


def save_game(game, path, kind=None):
    with open(path, "w") as fh:
        json.dump(game_to_dict(game, kind), fh, indent=2, sort_keys=True)
        fh.write("\n")


def profile_to_dict(game, u):
    data = {}
    for i in game.players():
        entries = []
        for key, choice in zip(u[i - 1].class_keys, u[i - 1].choices):
            observes = {
                name: bool(key & game.bit[name])
                for name in game.names_of(game.player_mask[i - 1])
            }
            reveal = {
                str(j): game.names_of(choice[j - 1])
                for j in game.players() if j != i
            }
            entries.append({"observes": observes, "reveal": reveal})
        data[str(i)] = entries
    return data


def profile_from_dict(game, data):
    strategies = []
    for i in game.players():
        table = {}
        for entry in data.get(str(i), []):
            key = 0
            for name, value in entry.get("observes", {}).items():
                if name not in game.bit or not (game.bit[name] & game.player_mask[i - 1]):
                    raise ValueError(f"player {i} does not observe {name!r}")
                if value:
                    key |= game.bit[name]
            row = [0] * game.n
            row[i - 1] = game.player_mask[i - 1]
            for j_text, names in entry.get("reveal", {}).items():
                j = int(j_text)
                mask = game.mask_of(names)
                if mask & ~game.player_mask[i - 1]:
                    raise ValueError(f"player {i} cannot reveal {names}")
                if j != i:
                    row[j - 1] = mask
            if key in table:
                raise ValueError(f"duplicate class for player {i}")
            table[key] = tuple(row)
        keys = class_keys(game, i)
        default = s_empty(game, i)
        strategies.append(UniformStrategy(
            i, keys, tuple(table.get(k, default) for k in keys)))
    return UniformProfile(tuple(strategies))


def load_profile(game, path):
    with open(path) as fh:
        return profile_from_dict(game, json.load(fh))


def save_profile(game, u, path):
    with open(path, "w") as fh:
        json.dump(profile_to_dict(game, u), fh, indent=2, sort_keys=True)
        fh.write("\n")


def search_report(game, relation, outcome):
    return {
        "relation": relation,
        "result": outcome.status,
        "witness": profile_to_dict(game, outcome.witness) if outcome.witness else None,
        "stats": outcome.stats,
    }

"""Blinded pairwise-preference annotation store.

Annotators compare two translations of the same source sentence without
knowing which system produced which pane. The left/right order is a
deterministic function of (session seed, item, annotator), persisted in an
assignment table that never leaves the server. Votes are appended to a
JSONL log already de-blinded (SYSTEM_A / SYSTEM_B / SAME), so the log is
directly consumable by the agreement tooling and survives restarts.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from ._util import stable_int
from .sampling import RatingMatrix, Vote, krippendorff_nominal, preference_summary

TASKS_FILE = "tasks.json"
ASSIGNMENTS_FILE = "assignments.json"
VOTES_FILE = "votes.jsonl"

CLIENT_CHOICES = ("LEFT", "RIGHT", "SAME")


class UnknownAnnotatorError(KeyError):
    pass


class UnknownItemError(KeyError):
    pass


class DuplicateVoteError(ValueError):
    pass


class BadChoiceError(ValueError):
    pass


@dataclass
class TaskItem:
    item_id: str
    source_text: str
    system_a_text: str
    system_b_text: str


def initialize_store(directory, tasks_path) -> None:
    """Copy a tasks file into a fresh store directory (no-op if present)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / TASKS_FILE
    if target.exists():
        return
    target.write_bytes(Path(tasks_path).read_bytes())


class AnnotationStore:
    """Durable vote store over a directory (tasks, assignments, vote log)."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self._lock = threading.Lock()
        raw = json.loads((self.directory / TASKS_FILE).read_text(encoding="utf-8"))
        self.session_seed = int(raw.get("session_seed", 0))
        self.annotators = [str(a) for a in raw["annotators"]]
        self.items = [
            TaskItem(
                item_id=str(it["item_id"]),
                source_text=str(it["source_text"]),
                system_a_text=str(it["system_a_text"]),
                system_b_text=str(it["system_b_text"]),
            )
            for it in raw["items"]
        ]
        self._items_by_id = {it.item_id: it for it in self.items}
        self._votes: dict[tuple[str, str], Vote] = {}
        self._replay_votes()
        self._write_assignment_table()
        self._votes_fh = open(self.directory / VOTES_FILE, "a", encoding="utf-8")

    # -- blinding ---------------------------------------------------------

    def assignment(self, item_id: str, annotator_id: str) -> dict[str, str]:
        """Hidden left/right -> system mapping for one (item, annotator)."""
        flip = stable_int(self.session_seed, item_id, annotator_id) % 2
        left, right = ("SYSTEM_B", "SYSTEM_A") if flip else ("SYSTEM_A", "SYSTEM_B")
        return {"left": left, "right": right}

    def _write_assignment_table(self):
        table = {
            annotator: {
                item.item_id: self.assignment(item.item_id, annotator)
                for item in self.items
            }
            for annotator in self.annotators
        }
        path = self.directory / ASSIGNMENTS_FILE
        path.write_text(json.dumps(table, ensure_ascii=False, indent=1), encoding="utf-8")

    # -- vote log ---------------------------------------------------------

    def _replay_votes(self):
        path = self.directory / VOTES_FILE
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                vote = Vote(
                    item_id=str(raw["item_id"]),
                    annotator_id=str(raw["annotator_id"]),
                    choice=str(raw["choice"]),
                )
                self._votes[(vote.item_id, vote.annotator_id)] = vote

    def _append_vote(self, vote: Vote):
        record = {
            "item_id": vote.item_id,
            "annotator_id": vote.annotator_id,
            "choice": vote.choice,
        }
        self._votes_fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        self._votes_fh.flush()
        os.fsync(self._votes_fh.fileno())

    def close(self):
        self._votes_fh.close()

    # -- API --------------------------------------------------------------

    def _require_annotator(self, annotator_id: str):
        if annotator_id not in self.annotators:
            raise UnknownAnnotatorError(annotator_id)

    def next_task(self, annotator_id: str) -> dict | None:
        """The annotator's next unvoted item as a blinded view, or None."""
        self._require_annotator(annotator_id)
        with self._lock:
            done = sum(
                1 for item in self.items if (item.item_id, annotator_id) in self._votes
            )
            for item in self.items:
                if (item.item_id, annotator_id) in self._votes:
                    continue
                sides = self.assignment(item.item_id, annotator_id)
                texts = {
                    "SYSTEM_A": item.system_a_text,
                    "SYSTEM_B": item.system_b_text,
                }
                return {
                    "item_id": item.item_id,
                    "source_text": item.source_text,
                    "left_text": texts[sides["left"]],
                    "right_text": texts[sides["right"]],
                    "progress": {"done": done, "total": len(self.items)},
                }
        return None

    def submit_vote(self, annotator_id: str, item_id: str, choice: str) -> None:
        """Record a LEFT/RIGHT/SAME vote, de-blinded to its system identity."""
        self._require_annotator(annotator_id)
        if item_id not in self._items_by_id:
            raise UnknownItemError(item_id)
        if choice not in CLIENT_CHOICES:
            raise BadChoiceError(choice)
        if choice == "SAME":
            system_choice = "SAME"
        else:
            system_choice = self.assignment(item_id, annotator_id)[choice.lower()]
        with self._lock:
            key = (item_id, annotator_id)
            if key in self._votes:
                raise DuplicateVoteError(f"{annotator_id} already voted on {item_id}")
            vote = Vote(item_id=item_id, annotator_id=annotator_id, choice=system_choice)
            self._append_vote(vote)
            self._votes[key] = vote

    def votes(self) -> list[Vote]:
        with self._lock:
            return list(self._votes.values())

    def progress(self) -> dict[str, dict[str, int]]:
        with self._lock:
            totals = {a: 0 for a in self.annotators}
            for _, annotator_id in self._votes:
                totals[annotator_id] = totals.get(annotator_id, 0) + 1
        return {
            a: {"done": totals[a], "total": len(self.items)} for a in self.annotators
        }

    def summary(self) -> dict:
        votes = self.votes()
        if not votes:
            return {"votes": 0, "percentages": {}, "alpha": None, "progress": self.progress()}
        percentages = preference_summary(votes)
        try:
            agreement = krippendorff_nominal(RatingMatrix.from_votes(votes))
            alpha = agreement.alpha
            degenerate = agreement.degenerate
        except ValueError:
            alpha = None
            degenerate = True
        return {
            "votes": len(votes),
            "percentages": percentages,
            "alpha": alpha,
            "alpha_degenerate": degenerate,
            "progress": self.progress(),
        }

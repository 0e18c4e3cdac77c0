// DOM-free application state machine. Rendering subscribes via onChange.
//
// Votes are never lost locally: a network failure keeps the chosen vote as
// pending until the server acknowledges it (accepted or conflict). A
// conflict means the server already has a vote for this item, so the app
// resyncs to the server's next task instead of re-submitting.

import { ApiClient, NetworkError } from "./api.js";
import { TaskView, VoteChoice } from "./types.js";

export type Screen =
  | { kind: "login"; error: string | null }
  | { kind: "task"; view: TaskView; banner: string | null; busy: boolean }
  | { kind: "done"; total: number };

export class App {
  screen: Screen = { kind: "login", error: null };
  annotator = "";
  pendingVote: VoteChoice | null = null;
  onChange: () => void = () => {};

  constructor(private readonly api: ApiClient) {}

  private update(screen: Screen): void {
    this.screen = screen;
    this.onChange();
  }

  async start(annotator: string): Promise<void> {
    const trimmed = annotator.trim();
    if (!trimmed) {
      this.update({ kind: "login", error: "enter your annotator id" });
      return;
    }
    this.annotator = trimmed;
    await this.loadNext();
  }

  private async loadNext(): Promise<void> {
    try {
      const result = await this.api.nextTask(this.annotator);
      this.pendingVote = null;
      if (result.kind === "done") {
        const total =
          this.screen.kind === "task" ? this.screen.view.progress.total : 0;
        this.update({ kind: "done", total });
      } else {
        this.update({ kind: "task", view: result.view, banner: null, busy: false });
      }
    } catch (err) {
      if (this.screen.kind === "login") {
        this.update({ kind: "login", error: String((err as Error).message) });
      } else {
        this.banner(`could not load the next task: ${(err as Error).message}`);
      }
    }
  }

  private banner(message: string | null): void {
    if (this.screen.kind === "task") {
      this.update({ ...this.screen, banner: message, busy: false });
    }
  }

  async vote(choice: VoteChoice): Promise<void> {
    if (this.screen.kind !== "task" || this.screen.busy) return;
    this.update({ ...this.screen, busy: true });
    this.pendingVote = choice;
    const itemId = this.screen.view.itemId;
    try {
      await this.api.submitVote(this.annotator, itemId, choice);
      // accepted and conflict both mean the server has a vote for this item:
      // advance to the server's view of the next task either way
      this.pendingVote = null;
      await this.loadNext();
    } catch (err) {
      if (err instanceof NetworkError) {
        // keep the pending vote for retry; nothing was acknowledged
        this.banner("connection lost - your vote is held locally, retry");
      } else {
        this.pendingVote = null;
        this.banner((err as Error).message);
      }
    }
  }

  async retry(): Promise<void> {
    if (this.pendingVote !== null) {
      const choice = this.pendingVote;
      this.banner(null);
      await this.vote(choice);
    } else {
      await this.loadNext();
    }
  }

  summaryUrl(): string {
    return this.api.summaryUrl();
  }
}

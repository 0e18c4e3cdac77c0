// Payload types mirroring the annotation API. The client only ever sees
// blinded left/right texts; parseTaskView picks exactly the known fields, so
// anything else a server might attach is dropped at the boundary.

export interface Progress {
  done: number;
  total: number;
}

export interface TaskView {
  itemId: string;
  sourceText: string;
  leftText: string;
  rightText: string;
  progress: Progress;
}

export type VoteChoice = "LEFT" | "RIGHT" | "SAME";

export function parseTaskView(raw: unknown): TaskView {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("task payload is not an object");
  }
  const obj = raw as Record<string, unknown>;
  const progress = obj.progress as Record<string, unknown> | undefined;
  if (
    typeof obj.item_id !== "string" ||
    typeof obj.source_text !== "string" ||
    typeof obj.left_text !== "string" ||
    typeof obj.right_text !== "string" ||
    typeof progress !== "object" ||
    progress === null ||
    typeof progress.done !== "number" ||
    typeof progress.total !== "number"
  ) {
    throw new Error("task payload is missing required fields");
  }
  return {
    itemId: obj.item_id,
    sourceText: obj.source_text,
    leftText: obj.left_text,
    rightText: obj.right_text,
    progress: { done: progress.done, total: progress.total },
  };
}

export function progressPercent(progress: Progress): number {
  if (progress.total <= 0) return 0;
  return Math.round((100 * progress.done) / progress.total);
}

export function choiceForKey(key: string): VoteChoice | null {
  switch (key) {
    case "1":
      return "LEFT";
    case "2":
      return "SAME";
    case "3":
      return "RIGHT";
    default:
      return null;
  }
}

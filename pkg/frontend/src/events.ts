/** Per-task event logger. One instance covers one (user, treatment, task)
 * stream; posts are serialized through a promise chain so the log order
 * matches the interaction order, and timestamps never decrease. */

import type { SearchClient } from "./api.js";
import type { EventKind, SentimentRect, Treatment } from "./types.js";

export interface StreamIdentity {
  userId: string;
  treatment: Treatment;
  taskId: string;
}

export const AESTHETICS_QUESTIONS = 5;

export interface QuestionnaireAnswers {
  aesthetics: number[];
  perceivedMinutes: number;
  summary: string;
}

export function validateQuestionnaire(answers: QuestionnaireAnswers): string[] {
  const problems: string[] = [];
  if (
    answers.aesthetics.length !== AESTHETICS_QUESTIONS ||
    !answers.aesthetics.every((a) => Number.isInteger(a) && a >= 1 && a <= 5)
  ) {
    problems.push("all 5 aesthetics answers are required (integers 1-5)");
  }
  if (!(answers.perceivedMinutes > 0)) {
    problems.push("perceived time must be a positive number of minutes");
  }
  return problems;
}

export class EventLogger {
  private lastTs = 0;
  private chain: Promise<void> = Promise.resolve();

  constructor(
    private readonly client: SearchClient,
    readonly identity: StreamIdentity,
    private readonly now: () => number = Date.now,
  ) {}

  private stamp(): number {
    const ts = Math.max(this.now(), this.lastTs);
    this.lastTs = ts;
    return ts;
  }

  private post(kind: EventKind, payload: Record<string, unknown>): Promise<void> {
    const body = {
      ts_ms: this.stamp(),
      user_id: this.identity.userId,
      treatment: this.identity.treatment,
      task_id: this.identity.taskId,
      kind,
      payload,
    };
    this.chain = this.chain.then(() => this.client.postEvent(body));
    return this.chain;
  }

  taskStart(): Promise<void> {
    return this.post("task_start", {});
  }

  query(text: string): Promise<void> {
    return this.post("query", { text });
  }

  filterChange(rect: SentimentRect): Promise<void> {
    return this.post("filter_change", { rect });
  }

  resultSelect(docId: string): Promise<void> {
    return this.post("result_select", { doc_id: docId });
  }

  /** Perceived time is asked in minutes; the log stores seconds. */
  questionnaire(answers: QuestionnaireAnswers): Promise<void> {
    const problems = validateQuestionnaire(answers);
    if (problems.length > 0) {
      throw new Error(problems.join("; "));
    }
    return this.post("questionnaire", {
      aesthetics: answers.aesthetics,
      perceived_time_s: answers.perceivedMinutes * 60,
      summary: answers.summary,
    });
  }

  taskEnd(): Promise<void> {
    return this.post("task_end", {});
  }
}

/** Study runner: walks a participant through randomized (task, treatment)
 * pairs, emitting task_start / questionnaire / task_end around the
 * interaction events the search app logs. The pair order is fully determined
 * by the participant's recorded seed.
 */

import type { SearchClient } from "./api.js";
import { EventLogger, QuestionnaireAnswers, validateQuestionnaire } from "./events.js";
import { mulberry32, seededShuffle } from "./rng.js";
import type { Treatment } from "./types.js";

export const TREATMENTS: Treatment[] = ["BA", "SC", "PC"];

export interface StudyTask {
  task_id: string;
  prompt: string;
}

export interface Participant {
  user_id: string;
  seed: number;
}

export interface StudyScript {
  participants: Participant[];
  tasks: StudyTask[];
  aesthetics_items: string[]; // the 5 Likert statements
  perceived_time_question: string;
}

export interface StudyPair {
  task: StudyTask;
  treatment: Treatment;
}

/** Parse and validate a study script document (JSON). */
export function parseStudyScript(raw: unknown): StudyScript {
  const problems: string[] = [];
  const doc = raw as Partial<StudyScript>;
  if (!Array.isArray(doc?.participants) || doc.participants.length === 0) {
    problems.push("participants must be a non-empty array");
  } else {
    for (const p of doc.participants) {
      if (typeof p.user_id !== "string" || !p.user_id || !Number.isInteger(p.seed)) {
        problems.push(`participant entries need user_id and integer seed (got ${JSON.stringify(p)})`);
        break;
      }
    }
  }
  if (!Array.isArray(doc?.tasks) || doc.tasks.length !== TREATMENTS.length) {
    problems.push(`tasks must list exactly ${TREATMENTS.length} entries`);
  } else {
    for (const t of doc.tasks) {
      if (typeof t.task_id !== "string" || !t.task_id || typeof t.prompt !== "string") {
        problems.push(`task entries need task_id and prompt (got ${JSON.stringify(t)})`);
        break;
      }
    }
  }
  if (
    !Array.isArray(doc?.aesthetics_items) ||
    doc.aesthetics_items.length !== 5 ||
    !doc.aesthetics_items.every((s) => typeof s === "string" && s.length > 0)
  ) {
    problems.push("aesthetics_items must hold the 5 Likert statements");
  }
  if (typeof doc?.perceived_time_question !== "string" || !doc.perceived_time_question) {
    problems.push("perceived_time_question is required");
  }
  if (problems.length > 0) {
    throw new Error(`invalid study script: ${problems.join("; ")}`);
  }
  return doc as StudyScript;
}

/** Randomized (task, treatment) pairs for one participant; each treatment and
 * each task appears exactly once, in a seed-determined order. */
export function buildSchedule(tasks: StudyTask[], seed: number): StudyPair[] {
  if (tasks.length !== TREATMENTS.length) {
    throw new Error(
      `need exactly ${TREATMENTS.length} tasks, got ${tasks.length}`,
    );
  }
  const rng = mulberry32(seed);
  const shuffledTasks = seededShuffle(tasks, rng);
  const shuffledTreatments = seededShuffle(TREATMENTS, rng);
  return shuffledTasks.map((task, i) => ({ task, treatment: shuffledTreatments[i] }));
}

export type StudyPhase = "idle" | "task" | "questionnaire" | "done";

export class StudyRunner {
  readonly schedule: StudyPair[];
  private pairIndex = -1;
  private phase: StudyPhase = "idle";
  private logger: EventLogger | null = null;

  constructor(
    private readonly client: SearchClient,
    readonly participant: Participant,
    tasks: StudyTask[],
    private readonly now: () => number = Date.now,
  ) {
    this.schedule = buildSchedule(tasks, participant.seed);
  }

  get currentPhase(): StudyPhase {
    return this.phase;
  }

  get currentPair(): StudyPair | null {
    return this.pairIndex >= 0 && this.pairIndex < this.schedule.length
      ? this.schedule[this.pairIndex]
      : null;
  }

  /** Logger for the active task's event stream (bind the SearchApp to it). */
  get currentLogger(): EventLogger {
    if (!this.logger) {
      throw new Error("no active task");
    }
    return this.logger;
  }

  get completed(): boolean {
    return this.phase === "done";
  }

  /** Advance to the next pair; emits task_start when the task screen shows. */
  async beginNextTask(): Promise<StudyPair> {
    if (this.phase === "task" || this.phase === "questionnaire") {
      throw new Error("current task not finished");
    }
    if (this.pairIndex + 1 >= this.schedule.length) {
      throw new Error("no tasks left");
    }
    this.pairIndex += 1;
    const pair = this.schedule[this.pairIndex];
    this.logger = new EventLogger(
      this.client,
      {
        userId: this.participant.user_id,
        treatment: pair.treatment,
        taskId: pair.task.task_id,
      },
      this.now,
    );
    await this.logger.taskStart();
    this.phase = "task";
    return pair;
  }

  /** The participant declares the task finished; the questionnaire opens. */
  finishTask(): void {
    if (this.phase !== "task") {
      throw new Error("no task in progress");
    }
    this.phase = "questionnaire";
  }

  /** All 5 Likert answers are required before the run can advance. */
  async submitQuestionnaire(answers: QuestionnaireAnswers): Promise<void> {
    if (this.phase !== "questionnaire") {
      throw new Error("questionnaire is not open");
    }
    const problems = validateQuestionnaire(answers);
    if (problems.length > 0) {
      throw new Error(`cannot advance: ${problems.join("; ")}`);
    }
    const logger = this.currentLogger;
    await logger.questionnaire(answers);
    await logger.taskEnd();
    this.logger = null;
    this.phase = this.pairIndex + 1 >= this.schedule.length ? "done" : "idle";
  }
}

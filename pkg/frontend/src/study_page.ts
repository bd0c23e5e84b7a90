/** DOM harness for a study session: task prompt screen, the treatment's
 * widget hosted in a SearchApp, and the gating questionnaire (5 Likert items,
 * perceived time in minutes, free-text summary). */

import { SearchClient } from "./api.js";
import { SearchApp } from "./app.js";
import type { QuestionnaireAnswers } from "./events.js";
import { StudyRunner, StudyScript } from "./study.js";

export class StudyPage {
  readonly el: HTMLElement;
  private readonly runner: StudyRunner;
  private app: SearchApp | null = null;

  constructor(
    private readonly doc: Document,
    private readonly client: SearchClient,
    private readonly script: StudyScript,
    participantIndex: number,
  ) {
    const participant = script.participants[participantIndex];
    if (!participant) {
      throw new Error(`no participant at index ${participantIndex}`);
    }
    this.runner = new StudyRunner(client, participant, script.tasks);
    this.el = doc.createElement("div");
    this.el.className = "study-page";
  }

  async start(): Promise<void> {
    await this.nextTask();
  }

  private clear(): void {
    while (this.el.firstChild) {
      this.el.removeChild(this.el.firstChild);
    }
  }

  private async nextTask(): Promise<void> {
    this.clear();
    if (this.runner.completed) {
      const done = this.doc.createElement("p");
      done.textContent = "All tasks complete. Thank you for participating.";
      done.setAttribute("data-phase", "done");
      this.el.appendChild(done);
      return;
    }
    const pair = await this.runner.beginNextTask();

    const prompt = this.doc.createElement("div");
    prompt.className = "task-prompt";
    prompt.setAttribute("data-phase", "task");
    const heading = this.doc.createElement("h2");
    heading.textContent = `Task ${pair.task.task_id}`;
    prompt.appendChild(heading);
    const text = this.doc.createElement("p");
    text.textContent = pair.task.prompt;
    prompt.appendChild(text);
    this.el.appendChild(prompt);

    const queryInput = this.doc.createElement("input");
    queryInput.type = "search";
    queryInput.placeholder = "search…";
    queryInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter" && this.app) {
        void this.app.submitQuery(queryInput.value);
      }
    });
    this.el.appendChild(queryInput);

    this.app = new SearchApp({
      doc: this.doc,
      client: this.client,
      logger: this.runner.currentLogger,
      treatment: pair.treatment,
    });
    this.el.appendChild(this.app.el);

    const finish = this.doc.createElement("button");
    finish.type = "button";
    finish.textContent = "finish task";
    finish.setAttribute("data-action", "finish-task");
    finish.addEventListener("click", () => {
      this.runner.finishTask();
      this.showQuestionnaire();
    });
    this.el.appendChild(finish);
  }

  private showQuestionnaire(): void {
    this.clear();
    const form = this.doc.createElement("form");
    form.setAttribute("data-phase", "questionnaire");

    const selects: HTMLSelectElement[] = [];
    for (const statement of this.script.aesthetics_items) {
      const row = this.doc.createElement("label");
      row.className = "likert-row";
      const text = this.doc.createElement("span");
      text.textContent = statement;
      row.appendChild(text);
      const select = this.doc.createElement("select");
      const blank = this.doc.createElement("option");
      blank.value = "";
      blank.textContent = "—";
      select.appendChild(blank);
      for (let value = 1; value <= 5; value++) {
        const option = this.doc.createElement("option");
        option.value = String(value);
        option.textContent = String(value);
        select.appendChild(option);
      }
      selects.push(select);
      row.appendChild(select);
      form.appendChild(row);
    }

    const perceivedLabel = this.doc.createElement("label");
    perceivedLabel.textContent = this.script.perceived_time_question + " ";
    const perceivedInput = this.doc.createElement("input");
    perceivedInput.type = "number";
    perceivedInput.min = "1";
    perceivedInput.setAttribute("data-field", "perceived-minutes");
    perceivedLabel.appendChild(perceivedInput);
    form.appendChild(perceivedLabel);

    const summaryInput = this.doc.createElement("textarea");
    summaryInput.placeholder = "Short summary of what you found";
    summaryInput.setAttribute("data-field", "summary");
    form.appendChild(summaryInput);

    const error = this.doc.createElement("p");
    error.className = "questionnaire-error";
    form.appendChild(error);

    const submit = this.doc.createElement("button");
    submit.type = "submit";
    submit.textContent = "continue";
    form.appendChild(submit);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const answers: QuestionnaireAnswers = {
        aesthetics: selects
          .map((s) => (s.value === "" ? NaN : Number(s.value)))
          .filter((v) => Number.isInteger(v)),
        perceivedMinutes: Number(perceivedInput.value),
        summary: summaryInput.value,
      };
      this.runner
        .submitQuestionnaire(answers)
        .then(() => this.nextTask())
        .catch((exc: Error) => {
          error.textContent = exc.message; // advance stays blocked
        });
    });
    this.el.appendChild(form);
  }
}

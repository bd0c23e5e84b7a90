/** Browser bootstrap: ad-hoc search page with a treatment switcher, or a
 * scripted study session.
 *
 * Query parameters:
 *   ?api=http://127.0.0.1:8080   backend base URL
 *   ?treatment=SC                initial widget (BA | SC | PC)
 *   ?user=alice                  user id for the event log
 *   ?script=study.json           run a study script instead of ad-hoc search
 *   ?participant=0               participant index within the script
 */

import { SearchClient } from "./api.js";
import { SearchApp } from "./app.js";
import { EventLogger } from "./events.js";
import { parseStudyScript } from "./study.js";
import { StudyPage } from "./study_page.js";
import type { Treatment } from "./types.js";

const TREATMENTS: Treatment[] = ["BA", "SC", "PC"];

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

function mintUserId(): string {
  return `u-${Date.now().toString(36)}-${Math.floor(Math.random() * 1e6).toString(36)}`;
}

async function mountStudy(root: HTMLElement, client: SearchClient, scriptUrl: string): Promise<void> {
  const response = await fetch(scriptUrl);
  if (!response.ok) {
    throw new Error(`cannot load study script ${scriptUrl}`);
  }
  const script = parseStudyScript(await response.json());
  const page = new StudyPage(document, client, script, Number(param("participant", "0")));
  root.appendChild(page.el);
  await page.start();
}

function mount(): void {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  const client = new SearchClient(param("api", "http://127.0.0.1:8080"));
  const scriptUrl = new URLSearchParams(window.location.search).get("script");
  if (scriptUrl) {
    void mountStudy(root, client, scriptUrl);
    return;
  }
  const userId = param("user", mintUserId());
  let treatment = (param("treatment", "SC") as Treatment);
  if (!TREATMENTS.includes(treatment)) {
    treatment = "SC";
  }

  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = "sentisearch";
  header.appendChild(title);

  const queryInput = document.createElement("input");
  queryInput.type = "search";
  queryInput.placeholder = "search…";
  header.appendChild(queryInput);

  const switcher = document.createElement("select");
  for (const t of TREATMENTS) {
    const option = document.createElement("option");
    option.value = t;
    option.textContent = { BA: "buttons", SC: "scatter plot", PC: "parallel coordinates" }[t];
    option.selected = t === treatment;
    switcher.appendChild(option);
  }
  header.appendChild(switcher);
  root.appendChild(header);

  const statsLine = document.createElement("p");
  statsLine.className = "corpus-stats";
  root.appendChild(statsLine);
  client
    .corpusStats()
    .then((stats) => {
      statsLine.textContent =
        `${stats.document_count} documents · ` +
        `positivity ${stats.positivity.mean.toFixed(2)} ± ${stats.positivity.stddev.toFixed(2)} · ` +
        `negativity ${stats.negativity.mean.toFixed(2)} ± ${stats.negativity.stddev.toFixed(2)}`;
    })
    .catch(() => {
      statsLine.textContent = "backend unreachable";
    });

  let taskCounter = 0;
  let app: SearchApp | null = null;

  const buildApp = async (t: Treatment) => {
    if (app) {
      root.removeChild(app.el);
    }
    taskCounter += 1;
    const logger = new EventLogger(client, {
      userId,
      treatment: t,
      taskId: `adhoc-${taskCounter}`,
    });
    await logger.taskStart();
    app = new SearchApp({ doc: document, client, logger, treatment: t });
    root.appendChild(app.el);
  };

  queryInput.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter" && app) {
      void app.submitQuery(queryInput.value);
    }
  });
  switcher.addEventListener("change", () => {
    void buildApp(switcher.value as Treatment);
  });

  void buildApp(treatment);
}

mount();

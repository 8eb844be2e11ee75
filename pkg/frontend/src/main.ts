// Wires the panes together: editor + config on the left, plot pane on
// the right. All data comes from the HTTP API; this file only routes it.

import { ApiClient, ApiError, type TraceResponse } from "./api";
import { Editor } from "./editor";
import { parseGraphType, readSettings, type SettingsInputs } from "./config";
import {
  allRunsFailed,
  allVariables,
  defaultVariables,
  renderEmptyState,
  renderHistogram,
  renderLegend,
  renderTrajectories,
} from "./plot";

const STORAGE_KEY = "hysim.program";

const DEFAULT_PROGRAM = `x := 0;
v := 2;
a := [2, 4, 6, 8, 10];
while true do {
  if v > 10 then a := -2;
  x' = v, v' = a for 1;
}
`;

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

export function startApp(): void {
  const apiBase =
    (window as { HYSIM_API?: string }).HYSIM_API ?? "";
  const api = new ApiClient(apiBase);

  const editor = new Editor(
    el<HTMLTextAreaElement>("program"),
    el<HTMLElement>("markers"),
  );
  const inputs: SettingsInputs = {
    maxTime: el<HTMLInputElement>("max-time"),
    sampleEvery: el<HTMLInputElement>("sample-every"),
    odeStep: el<HTMLInputElement>("ode-step"),
  };
  const graphType = el<HTMLInputElement>("graph-type");
  const runButton = el<HTMLButtonElement>("run");
  const status = el<HTMLElement>("status");
  const plotPane = el<HTMLElement>("plot");
  const legendPane = el<HTMLElement>("legend");
  const variablesPane = el<HTMLElement>("variables");

  editor.source = localStorage.getItem(STORAGE_KEY) ?? DEFAULT_PROGRAM;

  let lastTrace: TraceResponse | null = null;
  let selected: string[] = [];

  const refreshRunButton = () => {
    runButton.disabled = editor.isEmpty;
  };
  editor.textarea.addEventListener("input", refreshRunButton);
  refreshRunButton();

  editor.onIdle(async (source) => {
    localStorage.setItem(STORAGE_KEY, source);
    if (source.trim() === "") {
      editor.setDiagnostics([]);
      return;
    }
    try {
      const result = await api.parse(source);
      editor.setDiagnostics(result.diagnostics);
    } catch {
      // diagnostics refresh is best-effort; the run button reports hard errors
    }
  });

  const drawTrace = () => {
    if (!lastTrace) return;
    plotPane.replaceChildren();
    legendPane.replaceChildren();
    if (allRunsFailed(lastTrace)) {
      plotPane.appendChild(renderEmptyState(lastTrace));
      return;
    }
    const svg = renderTrajectories(lastTrace, selected);
    plotPane.appendChild(svg);
    legendPane.appendChild(renderLegend(lastTrace, svg));
  };

  const drawVariableToggles = () => {
    variablesPane.replaceChildren();
    if (!lastTrace) return;
    for (const name of allVariables(lastTrace)) {
      const label = document.createElement("label");
      const box = document.createElement("input");
      box.type = "checkbox";
      box.value = name;
      box.checked = selected.includes(name);
      box.addEventListener("change", () => {
        selected = box.checked
          ? [...selected, name].sort()
          : selected.filter((v) => v !== name);
        drawTrace();
      });
      label.appendChild(box);
      label.appendChild(document.createTextNode(name));
      variablesPane.appendChild(label);
    }
  };

  runButton.addEventListener("click", async () => {
    status.textContent = "running...";
    runButton.disabled = true;
    try {
      const settings = readSettings(inputs);
      const mode = parseGraphType(graphType.value);
      if (mode.kind === "trajectories") {
        lastTrace = await api.simulate({
          source: editor.source,
          ...settings,
        });
        selected = defaultVariables(lastTrace);
        drawVariableToggles();
        drawTrace();
      } else {
        const hist = await api.histogram({
          source: editor.source,
          query: mode.query,
          ...settings,
        });
        lastTrace = null;
        variablesPane.replaceChildren();
        legendPane.replaceChildren();
        plotPane.replaceChildren(renderHistogram(hist));
      }
      status.textContent = "";
    } catch (err) {
      if (err instanceof ApiError) {
        status.textContent = err.message;
        if (err.diagnostics.length > 0) {
          editor.setDiagnostics(err.diagnostics);
        }
      } else {
        status.textContent = String(err);
      }
    } finally {
      runButton.disabled = editor.isEmpty;
    }
  });
}

if (import.meta.env.MODE !== "test") {
  startApp();
}

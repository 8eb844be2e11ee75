// The config pane: simulation parameters plus the graph-type field that
// switches between overlaid trajectories and a histogram query.

export interface RunSettings {
  maxTime: number;
  sampleEvery: number;
  odeStep: number;
}

export type GraphMode =
  | { kind: "trajectories" }
  | { kind: "histogram"; query: string };

/**
 * Blank or the word "trajectories" selects trajectories mode; anything
 * else is sent to the histogram endpoint as a query string (the server
 * validates it and reports field-level errors).
 */
export function parseGraphType(text: string): GraphMode {
  const trimmed = text.trim();
  if (trimmed === "" || trimmed.toLowerCase() === "trajectories") {
    return { kind: "trajectories" };
  }
  return { kind: "histogram", query: trimmed };
}

export interface SettingsInputs {
  maxTime: HTMLInputElement;
  sampleEvery: HTMLInputElement;
  odeStep: HTMLInputElement;
}

export function readSettings(inputs: SettingsInputs): RunSettings {
  const read = (input: HTMLInputElement, name: string): number => {
    const value = Number(input.value);
    if (!Number.isFinite(value) || value <= 0) {
      throw new Error(`${name} must be a positive number`);
    }
    return value;
  };
  return {
    maxTime: read(inputs.maxTime, "max time"),
    sampleEvery: read(inputs.sampleEvery, "sampling period"),
    odeStep: read(inputs.odeStep, "solver step"),
  };
}

// The program editor: a plain textarea plus a marker strip that surfaces
// positioned diagnostics from the parse endpoint.

import type { Diagnostic } from "./api";

export class Editor {
  private listeners: Array<(source: string) => void> = [];
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    readonly textarea: HTMLTextAreaElement,
    readonly markerHost: HTMLElement,
    readonly idleMs = 400,
  ) {
    textarea.addEventListener("input", () => this.schedule());
  }

  get source(): string {
    return this.textarea.value;
  }

  set source(text: string) {
    this.textarea.value = text;
  }

  get isEmpty(): boolean {
    return this.source.trim().length === 0;
  }

  /** Called with the current source after the user pauses typing. */
  onIdle(listener: (source: string) => void): void {
    this.listeners.push(listener);
  }

  private schedule(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      for (const listener of this.listeners) listener(this.source);
    }, this.idleMs);
  }

  /** Replace the marker strip with one marker per diagnostic. */
  setDiagnostics(diagnostics: Diagnostic[]): void {
    this.markerHost.replaceChildren();
    for (const diag of diagnostics) {
      const marker = document.createElement("div");
      marker.className = "marker";
      marker.dataset.line = String(diag.line);
      marker.dataset.col = String(diag.col);
      marker.textContent =
        `line ${diag.line}, col ${diag.col}: ${diag.message}`;
      marker.addEventListener("click", () => this.focusAt(diag));
      this.markerHost.appendChild(marker);
    }
    this.textarea.classList.toggle("has-errors", diagnostics.length > 0);
  }

  /** Move the caret to a diagnostic's line/col. */
  focusAt(diag: Diagnostic): void {
    const lines = this.source.split("\n");
    let offset = 0;
    for (let i = 0; i < Math.min(diag.line - 1, lines.length); i++) {
      offset += lines[i].length + 1;
    }
    offset += diag.col - 1;
    this.textarea.focus();
    this.textarea.setSelectionRange(offset, offset);
  }
}

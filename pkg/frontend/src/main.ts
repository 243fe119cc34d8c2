import { ApiClient } from "./api.js";
import { render } from "./render.js";
import { WorkbenchStore } from "./state.js";

function parseSeries(text: string): number[] {
  return text
    .split(/[\n,;]+/)
    .map((token) => token.trim())
    .filter((token) => token.length > 0 && token.toLowerCase() !== "value")
    .map((token) => {
      const value = Number(token);
      if (!Number.isFinite(value)) throw new Error(`cannot parse sample "${token}"`);
      return value;
    });
}

function demoSeries(): number[] {
  const values: number[] = [];
  for (let n = 1; n <= 240; n++) {
    values.push(Math.exp(0.005 * n) + 1.5 * Math.sin((2 * Math.PI * n) / 12));
  }
  return values;
}

function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? "http://localhost:8000");
  const store = new WorkbenchStore(api);
  const mount = document.getElementById("workbench")!;
  store.subscribe(() => render(store, mount));
  render(store, mount);

  const form = document.getElementById("upload-form") as HTMLFormElement;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = (document.getElementById("series-text") as HTMLTextAreaElement).value;
    const windowField = (document.getElementById("window-length") as HTMLInputElement).value;
    const componentsField = (document.getElementById("n-components") as HTMLInputElement).value;
    try {
      const values = text.trim() ? parseSeries(text) : demoSeries();
      void store.load(values, {
        windowLength: windowField ? Number(windowField) : undefined,
        nComponents: componentsField ? Number(componentsField) : undefined,
      });
    } catch (err) {
      store.error = String((err as Error).message ?? err);
      render(store, mount);
    }
  });
}

window.addEventListener("DOMContentLoaded", boot);

import {
  bandPath,
  extentOf,
  forecastChartData,
  grayscale,
  heatmapCells,
  linePath,
  reconstructionChartData,
  scatterPoints,
  seriesColor,
  type ChartSeries,
} from "./charts.js";
import type { WorkbenchStore, ViewName } from "./state.js";

const VIEWS: Array<{ id: ViewName; label: string }> = [
  { id: "gallery", label: "Eigenvectors" },
  { id: "scatter", label: "Pair scatter" },
  { id: "wcor", label: "W-correlation" },
  { id: "reconstruction", label: "Reconstruction" },
  { id: "forecast", label: "Forecast" },
];

function el(html: string): HTMLElement {
  const template = document.createElement("template");
  template.innerHTML = html.trim();
  return template.content.firstElementChild as HTMLElement;
}

function sparkline(values: number[], width = 150, height = 48): string {
  const series: ChartSeries = { name: "", values, start: 1 };
  const ext = extentOf([values]);
  const d = linePath(series, ext, width, height, 1, values.length);
  return `<svg viewBox="0 0 ${width} ${height}" class="spark"><path d="${d}" fill="none" stroke="#1f77b4" stroke-width="1.4"/></svg>`;
}

function renderError(store: WorkbenchStore): string {
  return store.error ? `<div class="error" role="alert">${store.error}</div>` : "";
}

function renderTabs(store: WorkbenchStore): HTMLElement {
  const tabs = el(`<nav class="tabs"></nav>`);
  for (const view of VIEWS) {
    const button = el(
      `<button class="tab${store.view === view.id ? " active" : ""}">${view.label}</button>`,
    );
    button.addEventListener("click", () => {
      store.setView(view.id);
      if (view.id === "wcor" && !store.wcor) void store.fetchWcor();
    });
    tabs.appendChild(button);
  }
  return tabs;
}

function renderGallery(store: WorkbenchStore): HTMLElement {
  const root = el(`<section class="gallery"></section>`);
  const tiles = el(`<div class="tiles"></div>`);
  for (const m of store.pageIndices()) {
    const component = store.components.get(m);
    const share = store.session ? (store.session.contributions[m - 1] * 100).toFixed(2) : "?";
    const tile = el(`<figure class="tile">
      <figcaption><label><input type="checkbox" data-index="${m}"> ET${m}</label>
      <span class="share">${share}%</span></figcaption>
      ${component ? sparkline(component.eigenvector) : "<div class='spark loading'>loading</div>"}
    </figure>`);
    tiles.appendChild(tile);
  }
  root.appendChild(tiles);

  const pager = el(`<div class="pager">
    <button class="prev" ${store.page === 0 ? "disabled" : ""}>&#8592;</button>
    <span>page ${store.page + 1} / ${store.pageCount}</span>
    <button class="next" ${store.page >= store.pageCount - 1 ? "disabled" : ""}>&#8594;</button>
  </div>`);
  pager.querySelector(".prev")!.addEventListener("click", () => void store.setPage(store.page - 1));
  pager.querySelector(".next")!.addEventListener("click", () => void store.setPage(store.page + 1));
  root.appendChild(pager);

  const assign = el(`<form class="assign">
    <input name="group" placeholder="group name" required>
    <button type="submit">Assign selected</button>
  </form>`);
  assign.addEventListener("submit", (event) => {
    event.preventDefault();
    const name = (assign.querySelector("input[name=group]") as HTMLInputElement).value;
    const picked = [...root.querySelectorAll<HTMLInputElement>("input[type=checkbox]:checked")].map(
      (box) => Number(box.dataset.index),
    );
    void store.assignGroups(picked, name);
  });
  root.appendChild(assign);
  root.appendChild(renderGroupList(store));
  return root;
}

function renderGroupList(store: WorkbenchStore): HTMLElement {
  const list = el(`<ul class="groups"></ul>`);
  for (const [name, members] of Object.entries(store.grouping)) {
    const item = el(
      `<li><strong>${name}</strong>: ET${members.join(", ET")} <button class="drop">remove</button></li>`,
    );
    item.querySelector(".drop")!.addEventListener("click", () => void store.removeGroup(name));
    list.appendChild(item);
  }
  if (!list.childElementCount) list.appendChild(el(`<li class="empty">no groups yet</li>`));
  return list;
}

function renderScatter(store: WorkbenchStore): HTMLElement {
  const root = el(`<section class="scatter"><div class="tiles"></div></section>`);
  const tiles = root.querySelector(".tiles")!;
  const size = 130;
  for (const [i, j] of store.scatterPairs()) {
    const a = store.components.get(i);
    const b = store.components.get(j);
    if (!a || !b) {
      tiles.appendChild(el(`<figure class="tile pending">ET${i} vs ET${j}</figure>`));
      continue;
    }
    const dots = scatterPoints(a.eigenvector, b.eigenvector, size)
      .map((p) => `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="1.6"/>`)
      .join("");
    tiles.appendChild(
      el(`<figure class="tile"><figcaption>ET${i} vs ET${j}</figcaption>
        <svg viewBox="0 0 ${size} ${size}" class="spark">${dots}</svg></figure>`),
    );
  }
  return root;
}

function renderWcor(store: WorkbenchStore): HTMLElement {
  if (!store.wcor) return el(`<section><p>loading w-correlations...</p></section>`);
  const k = store.wcor.order;
  const cell = Math.max(8, Math.floor(360 / k));
  const rects = heatmapCells(store.wcor.values)
    .map(
      (c) =>
        `<rect x="${c.col * cell}" y="${c.row * cell}" width="${cell}" height="${cell}" fill="${c.fill}"><title>w(${c.row + 1},${c.col + 1}) = ${c.value.toFixed(3)}</title></rect>`,
    )
    .join("");
  return el(`<section class="wcor">
    <p>|w| grayscale: 0 &#8594; white, 1 &#8594; black</p>
    <svg viewBox="0 0 ${k * cell} ${k * cell}" width="${k * cell}">${rects}</svg>
  </section>`);
}

function renderLineChart(seriesList: ChartSeries[], band?: { lower: ChartSeries; upper: ChartSeries }): HTMLElement {
  const width = 640;
  const height = 260;
  const first = Math.min(...seriesList.map((s) => s.start));
  const last = Math.max(...seriesList.map((s) => s.start + s.values.length - 1));
  const all = seriesList.map((s) => s.values as ArrayLike<number>);
  if (band) all.push(band.lower.values, band.upper.values);
  const ext = extentOf(all);
  let body = "";
  if (band) {
    body += `<path d="${bandPath(band.lower, band.upper, ext, width, height, first, last)}" fill="#1f77b4" opacity="0.18" stroke="none"/>`;
  }
  seriesList.forEach((series, position) => {
    body += `<path d="${linePath(series, ext, width, height, first, last)}" fill="none" stroke="${seriesColor(position, series.name)}" stroke-width="1.4"/>`;
  });
  const legend = seriesList
    .map(
      (s, i) => `<span class="key" style="color:${seriesColor(i, s.name)}">&#9644; ${s.name}</span>`,
    )
    .join(" ");
  return el(`<div class="chart"><svg viewBox="0 0 ${width} ${height}">${body}</svg><div class="legend">${legend}</div></div>`);
}

function renderReconstruction(store: WorkbenchStore): HTMLElement {
  if (!store.reconstruction) {
    return el(`<section><p>assign eigentriples to a group to see reconstructions</p></section>`);
  }
  const root = el(`<section class="reconstruction"></section>`);
  root.appendChild(renderLineChart(reconstructionChartData(store.reconstruction)));
  return root;
}

function renderForecast(store: WorkbenchStore): HTMLElement {
  const root = el(`<section class="forecast"></section>`);
  const names = Object.keys(store.grouping);
  const controls = el(`<form class="forecast-controls">
    <select name="group">${names.map((n) => `<option>${n}</option>`).join("")}</select>
    <label>horizon <input name="horizon" type="number" min="1" value="24"></label>
    <label><input name="intervals" type="checkbox"> intervals</label>
    <button type="submit" ${names.length === 0 ? "disabled" : ""}>Forecast</button>
  </form>`);
  const horizonInput = controls.querySelector("input[name=horizon]") as HTMLInputElement;
  const submit = controls.querySelector("button") as HTMLButtonElement;
  horizonInput.addEventListener("input", () => {
    submit.disabled = names.length === 0 || Number(horizonInput.value) < 1;
  });
  controls.addEventListener("submit", (event) => {
    event.preventDefault();
    const group = (controls.querySelector("select") as HTMLSelectElement).value;
    const withBands = (controls.querySelector("input[name=intervals]") as HTMLInputElement).checked;
    void store.runForecast(group, Number(horizonInput.value), {
      intervals: withBands ? { level: 0.95, n_surrogates: 200, seed: 0 } : null,
    });
  });
  root.appendChild(controls);
  if (store.forecast) {
    const data = forecastChartData(store.forecast);
    const band = data.lower && data.upper ? { lower: data.lower, upper: data.upper } : undefined;
    root.appendChild(renderLineChart([data.fitted, data.horizon], band));
  }
  return root;
}

export function render(store: WorkbenchStore, mount: HTMLElement): void {
  mount.replaceChildren();
  mount.insertAdjacentHTML("afterbegin", renderError(store));
  if (!store.session) {
    mount.appendChild(el(`<p class="empty">upload a series to start a session</p>`));
    return;
  }
  const meta = store.session;
  mount.appendChild(
    el(`<p class="meta">session ${meta.id.slice(0, 8)} &middot; N=${meta.N} L=${meta.L} K=${meta.K} d=${meta.d}</p>`),
  );
  mount.appendChild(renderTabs(store));
  switch (store.view) {
    case "gallery":
      mount.appendChild(renderGallery(store));
      break;
    case "scatter":
      mount.appendChild(renderScatter(store));
      break;
    case "wcor":
      mount.appendChild(renderWcor(store));
      break;
    case "reconstruction":
      mount.appendChild(renderReconstruction(store));
      break;
    case "forecast":
      mount.appendChild(renderForecast(store));
      break;
  }
}

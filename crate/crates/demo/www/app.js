import init, { solveGame, replicator, habermann } from "./pkg/pubmarket_demo.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1b7837", "#762a83", "#e08214"];

function esc(s) {
  return String(s).replace(/[&<>]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;" })[c]);
}

function call(fn, input) {
  try {
    return { ok: JSON.parse(fn(JSON.stringify(input))) };
  } catch (e) {
    return { err: e.message || String(e) };
  }
}

function parseMatrix(text) {
  const rows = text.trim().split("\n").filter((l) => l.trim() !== "");
  const payoffs = rows.map((line) =>
    line.split(";").map((cell) => {
      const parts = cell.split(",").map((t) => t.trim());
      if (parts.length !== 2) throw new Error(`cell "${cell.trim()}" needs two payoffs`);
      return parts;
    }),
  );
  const n = payoffs[0].length;
  return {
    row_strategies: payoffs.map((_, i) => `r${i + 1}`),
    col_strategies: Array.from({ length: n }, (_, j) => `c${j + 1}`),
    payoffs,
  };
}

function gameTable(input, nash) {
  const hit = new Set(nash.map((e) => `${e.row}|${e.col}`));
  let h = "<table><tr><th></th>" + input.col_strategies.map((c) => `<th>${esc(c)}</th>`).join("") + "</tr>";
  input.payoffs.forEach((row, i) => {
    const r = input.row_strategies[i];
    h += `<tr><th>${esc(r)}</th>`;
    row.forEach((cell, j) => {
      const cls = hit.has(`${r}|${input.col_strategies[j]}`) ? ' class="ne"' : "";
      h += `<td${cls}>${esc(cell[0])}, ${esc(cell[1])}</td>`;
    });
    h += "</tr>";
  });
  return h + "</table>";
}

function equilibriaHtml(res) {
  let h = "<p><b>Pure Nash:</b> ";
  h += res.pure_nash.length === 0
    ? "none"
    : res.pure_nash
        .map((e) => `(${esc(e.row)}, ${esc(e.col)}) ${e.pareto_optimal ? "Pareto optimal" : "Pareto dominated"}`)
        .join("; ");
  h += "</p>";
  if (res.mixed_skipped) return h + "<p>Mixed equilibria: game too large.</p>";
  h += "<p><b>Mixed equilibria:</b></p><pre>";
  h += res.mixed.map((m) => `row (${m.row.join(", ")})  column (${m.col.join(", ")})  [${m.kind}]`).join("\n");
  return h + "</pre>";
}

function runSolve() {
  const out = $("solve-out");
  let input;
  try {
    input = parseMatrix($("matrix").value);
  } catch (e) {
    out.innerHTML = `<p class="err">${esc(e.message)}</p>`;
    return;
  }
  const r = call(solveGame, input);
  out.innerHTML = r.err
    ? `<p class="err">${esc(r.err)}</p>`
    : gameTable(input, r.ok.pure_nash) + equilibriaHtml(r.ok);
}

function plot(states, labels) {
  const cv = $("plot");
  const ctx = cv.getContext("2d");
  const w = cv.width, h = cv.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, 10, w - pad - 10, h - pad - 10);
  ctx.fillStyle = "#444";
  ctx.fillText("1", 10, 14);
  ctx.fillText("0", 10, h - pad);
  ctx.fillText(`${states.length - 1} steps`, w - 70, h - 8);
  const x = (t) => pad + ((w - pad - 10) * t) / Math.max(1, states.length - 1);
  const y = (v) => h - pad - (h - pad - 10) * v;
  for (let k = 0; k < 3; k++) {
    ctx.strokeStyle = COLORS[k];
    ctx.lineWidth = 2;
    ctx.beginPath();
    states.forEach((s, t) => (t === 0 ? ctx.moveTo(x(t), y(s[k])) : ctx.lineTo(x(t), y(s[k]))));
    ctx.stroke();
    ctx.fillStyle = COLORS[k];
    ctx.fillText(labels[k], pad + 10 + 40 * k, h - 8);
  }
}

function runShares() {
  const raw = ["x-oa", "x-c", "x-h"].map((id) => Math.max(0, Number($(id).value) || 0));
  const sum = raw.reduce((a, b) => a + b, 0);
  const out = $("shares-out");
  $("herd-val").textContent = $("herd").value;
  if (sum <= 0) {
    out.innerHTML = '<p class="err">at least one share must be positive</p>';
    return;
  }
  const r = call(replicator, {
    init: raw.map((v) => v / sum),
    herd: Number($("herd").value),
    steps: Number($("steps").value),
  });
  if (r.err) {
    out.innerHTML = `<p class="err">${esc(r.err)}</p>`;
    return;
  }
  plot(r.ok.states, r.ok.labels);
  const last = r.ok.states[r.ok.states.length - 1];
  out.innerHTML =
    `<p>final shares: ${r.ok.labels.map((l, k) => `${l} ${last[k].toFixed(4)}`).join(", ")}<br>` +
    (r.ok.converged_to
      ? `converged to ${r.ok.converged_to} (above 0.99 from step ${r.ok.time_to_threshold})`
      : "no model reached 0.99") +
    `</p>`;
}

const HAB = [
  ["R", 10, "author reputation"],
  ["r", 2, "reputation lost going open"],
  ["I", 5, "impact"],
  ["tau", 1, "impact lost going traditional"],
  ["L", 2, "open-access expenditure"],
  ["G", 3, "price"],
  ["P", 4, "excess profit"],
];

function runHabermann() {
  const params = {};
  for (const [k] of HAB) params[k] = $(`hab-${k}`).value.trim();
  const r = call(habermann, params);
  const out = $("hab-out");
  if (r.err) {
    out.innerHTML = `<p class="err">${esc(r.err)}</p>`;
    return;
  }
  const input = { row_strategies: ["s1", "s2"], col_strategies: ["p1", "p2"], payoffs: r.ok.cells };
  const c = r.ok.conditions;
  const mark = (b) => (b ? "yes" : "no");
  out.innerHTML =
    gameTable(input, r.ok.equilibria.pure_nash) +
    equilibriaHtml(r.ok.equilibria) +
    `<p><b>Best responses from (s1, p1):</b> ${esc(r.ok.br_path)}</p>` +
    "<table><tr><th>condition</th><th>holds</th></tr>" +
    `<tr><td>r + L/2 &gt; tau</td><td>${mark(c.author_leaves_open)}</td></tr>` +
    `<tr><td>G + P + tau &gt; r + L</td><td>${mark(c.author_returns_to_open)}</td></tr>` +
    `<tr><td>G + I - L/2 &gt; 0</td><td>${mark(c.publisher_returns_to_open)}</td></tr></table>`;
}

await init();

$("hab-params").innerHTML = HAB.map(
  ([k, v, title]) => `<label title="${title}">${k} <input id="hab-${k}" value="${v}" size="5"></label>`,
).join("");
for (const [k] of HAB) $(`hab-${k}`).addEventListener("input", runHabermann);
$("solve-btn").addEventListener("click", runSolve);
for (const id of ["x-oa", "x-c", "x-h", "herd", "steps"]) $(id).addEventListener("input", runShares);

runSolve();
runShares();
runHabermann();

// Page wiring: one push subscription, request/response per user action.

import { ApiClient, ApiError, singleFlight } from "./api.js";
import {
  renderCameraTiles,
  renderMapGrid,
  renderPendingCards,
  renderPeople,
  renderPrefs,
  renderSmsLog,
  renderTaskTable,
} from "./render.js";
import { ServerState } from "./types.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(location.search).get("api");
  if (fromQuery) return fromQuery.replace(/\/$/, "");
  if (location.protocol.startsWith("http")) return location.origin;
  return "http://127.0.0.1:8723";
}

const api = new ApiClient(apiBase());

interface PushBox {
  state: ServerState | null;
  receivedAt: number; // wall clock ms when the push arrived
}

const box: PushBox = { state: null, receivedAt: 0 };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function setStatus(text: string, error = false): void {
  const status = el<HTMLSpanElement>("status");
  status.textContent = text;
  status.className = error ? "error" : "";
}

function flash(message: string, error = false): void {
  setStatus(message, error);
  window.setTimeout(() => {
    if (box.state) setStatus(`simulated time ${box.state.now}`);
  }, 2500);
}

// -- rendering ------------------------------------------------------------

function renderAll(): void {
  const state = box.state;
  if (!state) return;
  setStatus(`simulated time ${state.now}`);
  el("current-tasks").innerHTML = renderTaskTable(state.tasks);
  el("sms-log").innerHTML = renderSmsLog(state.sms_log);
  renderCountdowns();
  el("people-list").innerHTML = renderPeople(state.people);
  el("prefs").innerHTML = renderPrefs(state.prefs, state.emergency_kinds);
  el("map").innerHTML = renderMapGrid(state.map);
  el("cameras").innerHTML = renderCameraTiles(state.view);
  const kinds = el<HTMLSelectElement>("task-kind");
  if (kinds.options.length !== state.task_kinds.length) {
    const selected = kinds.value;
    kinds.innerHTML = state.task_kinds
      .map((k) => `<option value="${k.kind}">${k.name}</option>`)
      .join("");
    if (selected) kinds.value = selected;
  }
}

function renderCountdowns(): void {
  const state = box.state;
  if (!state) return;
  const elapsed = Date.now() - box.receivedAt;
  el("pending").innerHTML = renderPendingCards(state.pending, state.now, elapsed);
}

window.setInterval(renderCountdowns, 1000);

// -- push subscription with polling fallback ---------------------------------

function applyState(state: ServerState): void {
  box.state = state;
  box.receivedAt = Date.now();
  renderAll();
}

let polling: number | null = null;

function startPolling(): void {
  if (polling !== null) return;
  polling = window.setInterval(async () => {
    try {
      applyState(await api.state());
    } catch {
      setStatus("service unreachable", true);
    }
  }, 2000);
}

function connect(): void {
  let socket: WebSocket;
  try {
    socket = new WebSocket(api.wsUrl());
  } catch {
    startPolling();
    return;
  }
  socket.onmessage = (event) => applyState(JSON.parse(event.data));
  socket.onclose = () => startPolling();
  socket.onerror = () => socket.close();
}

// -- pages ---------------------------------------------------------------------

function showPage(name: string): void {
  for (const section of document.querySelectorAll<HTMLElement>("main section")) {
    section.hidden = section.id !== `page-${name}`;
  }
  for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
    button.classList.toggle("active", button.dataset.page === name);
  }
}

for (const button of document.querySelectorAll<HTMLButtonElement>("nav button")) {
  button.addEventListener("click", () => showPage(button.dataset.page ?? "tasks"));
}

// New task form: one command per acknowledged click.
const submitTask = singleFlight(async () => {
  const date = el<HTMLInputElement>("task-date").value;
  const time = el<HTMLInputElement>("task-time").value;
  const kind = el<HTMLSelectElement>("task-kind").value;
  const priority = el<HTMLSelectElement>("task-priority").value;
  if (!kind || !date || !time) {
    flash("date, time and task are required", true);
    return;
  }
  const seconds = time.length === 5 ? `${time}:00` : time;
  try {
    const created = await api.addTask({ kind, scheduled_at: `${date} ${seconds}`, priority });
    flash(`task ${created.task_id} queued`);
  } catch (err) {
    flash(err instanceof ApiError ? err.message : String(err), true);
  }
});

el<HTMLFormElement>("new-task-form").addEventListener("submit", (event) => {
  event.preventDefault();
  void submitTask();
});

// Reply buttons: post the option number; the next push flips the card.
el("pending").addEventListener("click", async (event) => {
  const target = event.target as HTMLElement;
  if (!target.matches("button.option")) return;
  const message = Number(target.dataset.message);
  const option = Number(target.dataset.option);
  for (const b of target.closest(".card")!.querySelectorAll("button")) {
    (b as HTMLButtonElement).disabled = true;
  }
  try {
    await api.reply(message, option);
    flash(`reply ${option} sent`);
  } catch (err) {
    flash(err instanceof ApiError ? err.message : String(err), true);
  }
});

// Add person form.
const submitPerson = singleFlight(async () => {
  try {
    const created = await api.addPerson({
      name: el<HTMLInputElement>("person-name").value,
      face_tag: el<HTMLInputElement>("person-tag").value,
      photo_ref: el<HTMLInputElement>("person-photo").value,
      telephone: el<HTMLInputElement>("person-telephone").value,
      mobile: el<HTMLInputElement>("person-mobile").value,
    });
    flash(`person ${created.person_id} added`);
    el<HTMLFormElement>("new-person-form").reset();
  } catch (err) {
    flash(err instanceof ApiError ? err.message : String(err), true);
  }
});

el<HTMLFormElement>("new-person-form").addEventListener("submit", (event) => {
  event.preventDefault();
  void submitPerson();
});

el("people-list").addEventListener("click", async (event) => {
  const target = event.target as HTMLElement;
  if (!target.matches("button.remove")) return;
  try {
    await api.removePerson(Number(target.dataset.person));
  } catch (err) {
    flash(err instanceof ApiError ? err.message : String(err), true);
  }
});

// Preference toggles; emergency kinds render disabled so they never get here.
el("prefs").addEventListener("change", async (event) => {
  const target = event.target as HTMLInputElement;
  if (!target.matches("input.pref") || target.disabled) return;
  try {
    await api.setPref(target.dataset.kind ?? "", target.checked);
  } catch (err) {
    target.checked = !target.checked;
    flash(err instanceof ApiError ? err.message : String(err), true);
  }
});

// Demo-time controls (simulation only advances when asked to).
el("advance-30").addEventListener("click", () => void api.advance(30).catch(() => {}));
el("advance-300").addEventListener("click", () => void api.advance(300).catch(() => {}));

showPage("tasks");
connect();
api
  .state()
  .then(applyState)
  .catch(() => setStatus("service unreachable", true));

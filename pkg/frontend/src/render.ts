// Pure renderers: server state in, HTML strings out. No local state beyond
// what the last push reported, so a reload always reconstructs the same view.

import {
  CameraTile,
  MapPayload,
  PendingCard,
  PersonRow,
  SmsRow,
  TaskRow,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Parse a server "YYYY-MM-DD HH:MM:SS" stamp to epoch milliseconds. */
export function parseStamp(stamp: string): number {
  return new Date(stamp.replace(" ", "T")).getTime();
}

/**
 * Seconds left on a reply window. Derived from the server's deadline and the
 * server's clock at push time plus wall time since the push arrived; never
 * from the local clock alone.
 */
export function remainingSeconds(deadline: string, serverNow: string, msSincePush: number): number {
  const left = parseStamp(deadline) - (parseStamp(serverNow) + msSincePush);
  return Math.max(0, Math.floor(left / 1000));
}

export function renderTaskTable(rows: TaskRow[]): string {
  const body = rows
    .map(
      (r) =>
        `<tr><td>${r[0]}</td><td>${escapeHtml(r[1])}</td><td>${escapeHtml(r[2])}</td>` +
        `<td>${escapeHtml(r[3])}</td><td>${escapeHtml(r[4])}</td><td>${escapeHtml(r[5])}</td></tr>`,
    )
    .join("");
  return (
    "<table><thead><tr><th>ID</th><th>Date</th><th>Time</th><th>Task</th>" +
    "<th>Priority</th><th>Progress</th></tr></thead>" +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderSmsLog(rows: SmsRow[]): string {
  const body = rows
    .map((r) => `<tr>${r.map((cell) => `<td>${escapeHtml(cell)}</td>`).join("")}</tr>`)
    .join("");
  return (
    "<table><thead><tr><th>Date</th><th>Time</th><th>SMS Sent</th>" +
    "<th>Action Received</th><th>Action Done</th></tr></thead>" +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderPendingCard(card: PendingCard, remaining: number): string {
  const buttons = card.options
    .map(
      (o) =>
        `<button class="option${o.default ? " default" : ""}" ` +
        `data-message="${card.message_id}" data-option="${o.number}">` +
        `${o.number}. ${escapeHtml(o.label)}</button>`,
    )
    .join("");
  return (
    `<div class="card" data-message="${card.message_id}">` +
    `<p class="info">${escapeHtml(card.info)}</p>` +
    `<p class="countdown" data-deadline="${escapeHtml(card.deadline)}">` +
    `Reply within <b>${remaining}</b> s</p>` +
    `<div class="options">${buttons}</div></div>`
  );
}

export function renderPendingCards(cards: PendingCard[], serverNow: string, msSincePush: number): string {
  if (cards.length === 0) {
    return '<p class="empty">No SMS waiting for a reply.</p>';
  }
  return cards
    .map((c) => renderPendingCard(c, remainingSeconds(c.deadline, serverNow, msSincePush)))
    .join("");
}

export function renderCameraTiles(cameras: CameraTile[]): string {
  return cameras
    .map(
      (c) =>
        `<div class="tile" data-camera="${escapeHtml(c.id)}">` +
        `<div class="feed">■</div><label>${escapeHtml(c.room)}</label></div>`,
    )
    .join("");
}

export function renderMapGrid(map: MapPayload): string {
  const locations = new Map<string, string>();
  for (const [label, [r, c]] of Object.entries(map.locations)) {
    locations.set(`${r},${c}`, label);
  }
  const onPath = new Set(map.path.map(([r, c]) => `${r},${c}`));
  const robot = `${map.robot[0]},${map.robot[1]}`;
  const cells: string[] = [];
  for (let r = 0; r < map.height; r++) {
    for (let c = 0; c < map.width; c++) {
      const key = `${r},${c}`;
      const classes = ["cell", map.rows[r][c] === "." ? "floor" : "wall"];
      if (onPath.has(key)) classes.push("path");
      if (locations.has(key)) classes.push("location");
      if (key === robot) classes.push("robot");
      const title = locations.get(key);
      cells.push(
        `<div class="${classes.join(" ")}"${title ? ` title="${escapeHtml(title)}"` : ""}></div>`,
      );
    }
  }
  return (
    `<div class="grid" style="grid-template-columns: repeat(${map.width}, 1fr)">` +
    cells.join("") +
    "</div>"
  );
}

export function renderPeople(people: PersonRow[]): string {
  const body = people
    .map(
      (p) =>
        `<tr><td>${p.id}</td><td>${escapeHtml(p.name)}</td><td>${escapeHtml(p.telephone)}</td>` +
        `<td>${escapeHtml(p.mobile)}</td>` +
        `<td><button class="remove" data-person="${p.id}">remove</button></td></tr>`,
    )
    .join("");
  return (
    "<table><thead><tr><th>ID</th><th>Name</th><th>Telephone</th><th>Mobile</th><th></th></tr></thead>" +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderPrefs(prefs: Record<string, boolean>, emergencyKinds: string[]): string {
  const reaction = Object.entries(prefs)
    .map(
      ([kind, enabled]) =>
        `<label><input type="checkbox" class="pref" data-kind="${escapeHtml(kind)}"` +
        `${enabled ? " checked" : ""}> ${escapeHtml(kind)}</label>`,
    )
    .join("");
  const locked = emergencyKinds
    .map(
      (kind) =>
        `<label class="locked"><input type="checkbox" class="pref" data-kind="${escapeHtml(kind)}"` +
        ` checked disabled> ${escapeHtml(kind)} (always delivered)</label>`,
    )
    .join("");
  return `<div class="prefs">${reaction}${locked}</div>`;
}

export function renderTaskKindOptions(kinds: string[]): string {
  return kinds.map((k) => `<option value="${escapeHtml(k)}">${escapeHtml(k)}</option>`).join("");
}

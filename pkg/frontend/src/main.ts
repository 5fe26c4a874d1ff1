/** Bootstrap: single base-URL setting, then hand control to the App. */

import { ApiClient } from './api.js';
import { App } from './app.js';

declare global {
  interface Window {
    ISSUESCOPE_API_BASE?: string;
  }
}

const baseUrl = window.ISSUESCOPE_API_BASE ?? '';
const root = document.getElementById('app');
if (!root) throw new Error('missing #app container');

const app = new App(new ApiClient(baseUrl), root);
void app.render();

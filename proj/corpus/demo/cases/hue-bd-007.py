import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def dim(light_id, brightness):
    url = f'{BASE}/resource/light/{light_id}'
    payload = {'type': 'light'}
    payload.update({'dimming': {'brightness': brightness}})
    resp = requests.put(url, headers=HEADERS, json=payload)
    return resp.json()
